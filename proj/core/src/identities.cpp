#include "qfilter/identities.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

#include "qfilter/ito.hpp"
#include "qfilter/qprob.hpp"
#include "qfilter/trajectory.hpp"

namespace qfilter {

HPModel random_model(int dim, Rng& rng) {
    return HPModel(random_unitary(dim, rng), random_complex_matrix(dim, rng), random_hermitian(dim, rng));
}

namespace {

class Tally {
public:
    explicit Tally(std::vector<std::string> names) {
        for (auto& n : names) checks_.push_back({std::move(n), 0.0, 0});
    }

    void record(std::size_t which, double residual) {
        auto& c = checks_[which];
        // NaN must surface as a failure, so it wins over any finite value.
        if (std::isnan(residual) || !(c.residual >= residual)) c.residual = residual;
        ++c.instances;
    }

    std::vector<IdentityCheck> take() { return std::move(checks_); }

private:
    std::vector<IdentityCheck> checks_;
};

// Block-diagonal with respect to the algebra's projections, hence in its
// commutant.
ComplexMatrix random_commutant_element(const MeasurementAlgebra& algebra, Rng& rng) {
    const ComplexMatrix g = random_complex_matrix(algebra.dim(), rng);
    ComplexMatrix out = ComplexMatrix::Zero(algebra.dim(), algebra.dim());
    for (const auto& p : algebra.projections()) out += p * g * p;
    return out;
}

std::vector<int> dims_or(const SuiteOptions& options, std::vector<int> fallback) {
    return options.dims.empty() ? fallback : options.dims;
}

IncrementPolynomial random_polynomial(int dim, Rng& rng) {
    IncrementPolynomial p;
    p.dt = random_complex_matrix(dim, rng);
    p.dB = random_complex_matrix(dim, rng);
    p.dB_dag = random_complex_matrix(dim, rng);
    p.dLambda = random_complex_matrix(dim, rng);
    return p;
}

}  // namespace

std::vector<IdentityCheck> run_qprob_suite(const SuiteOptions& options) {
    enum { defining, projection, least_squares, rotation, bayes };
    Tally tally({"qprob.defining_property", "qprob.projection", "qprob.least_squares", "qprob.rotation",
                 "qprob.bayes"});
    Rng rng(options.seed);
    for (int dim : dims_or(options, {2, 4, 8})) {
        for (int i = 0; i < options.instances; ++i) {
            const MeasurementAlgebra algebra(random_commuting_family(dim, 2, rng));
            const QuantumState state = random_density(dim, rng);
            const ComplexMatrix x = random_commutant_element(algebra, rng);

            tally.record(defining, verify_defining_property(x, algebra, state));

            const ComplexMatrix e = conditional_expectation(x, algebra, state);
            tally.record(projection, max_abs(conditional_expectation(e, algebra, state) - e));

            ComplexMatrix y = ComplexMatrix::Zero(dim, dim);
            for (const auto& p : algebra.projections()) y += random_complex(rng) * p;
            tally.record(least_squares, std::max(0.0, state_norm(x - e, state) - state_norm(x - y, state)));

            tally.record(rotation, rotated_conditional(x, algebra, state, random_unitary(dim, rng)).residual());

            // The transformed state F rho F† has unit trace when tr(rho F†F) = 1.
            ComplexMatrix f = random_commutant_element(algebra, rng);
            f /= std::sqrt(expectation(state, f.adjoint() * f).real());
            const ComplexMatrix rho_f = f * state.matrix() * f.adjoint();
            const QuantumState transformed(hermitian_part(rho_f / rho_f.trace().real()));
            tally.record(bayes, max_abs(bayes_conditional(x, f, algebra, state) -
                                        conditional_expectation(x, algebra, transformed)));
        }
    }
    return tally.take();
}

double quadrature_gain_duality(const HPModel& m, complex beta, const ComplexMatrix& rho, const ComplexMatrix& x) {
    constexpr double dt = 1e-3;
    constexpr double eps = 1e-3;
    const CoherentInput input = CoherentInput::constant(beta);
    const FilterState s{rho, 0.0, 0.0};
    const ComplexMatrix up = quad_filter_step(s, eps, m, input, dt).rho;
    const ComplexMatrix down = quad_filter_step(s, -eps, m, input, dt).rho;
    const complex induced = expectation(up - down, x) / (2.0 * eps);
    return std::abs(induced - innovation_gain(MeasurementKind::quadrature, rho, m, beta, x));
}

double counting_gain_duality(const HPModel& m, complex beta, const ComplexMatrix& rho, const ComplexMatrix& x) {
    constexpr double dt = 1e-13;
    const CoherentInput input = CoherentInput::constant(beta);
    const FilterState s{rho, 0.0, 0.0};
    const ComplexMatrix click = count_filter_step(s, 1, m, input, dt).rho;
    const ComplexMatrix quiet = count_filter_step(s, 0, m, input, dt).rho;
    const complex induced = expectation(click - quiet, x);
    return std::abs(induced - innovation_gain(MeasurementKind::counting, rho, m, beta, x));
}

std::vector<IdentityCheck> run_ito_suite(const SuiteOptions& options) {
    enum {
        lindblad_form,
        coherent_average,
        girsanov,
        zakai_quadrature,
        zakai_counting,
        rearrangement,
        associativity,
        nondemolition,
        duality_quadrature,
        duality_counting
    };
    Tally tally({"ito.lindblad_form", "ito.coherent_average", "ito.girsanov_consistency", "ito.zakai_quadrature",
                 "ito.zakai_counting", "ito.zakai_rearrangement", "ito.associativity", "ito.nondemolition",
                 "ito.gain_duality_quadrature", "ito.gain_duality_counting"});
    Rng rng(options.seed);
    for (int dim : dims_or(options, {2, 3, 4})) {
        for (int i = 0; i < options.instances; ++i) {
            const HPModel m = random_model(dim, rng);
            const complex beta = random_complex(rng);
            const ComplexMatrix x = random_complex_matrix(dim, rng);
            const ComplexMatrix generator = heisenberg_generator(m, beta, x);

            const auto ops = modulated_operators(m, beta);
            tally.record(lindblad_form, max_abs(generator - lindblad_generator(ops.coupling, ops.hamiltonian, x)));
            tally.record(coherent_average, verify_generator(m, beta, x));

            const auto g = girsanov_coefficients(m, beta, MeasurementKind::quadrature);
            tally.record(girsanov, max_abs(g.tilde_coupling - (ops.coupling - beta * identity(dim))));

            double rearranged = 0.0;
            for (MeasurementKind kind : {MeasurementKind::quadrature, MeasurementKind::counting}) {
                const auto [expanded, mismatch] = zakai_from_ito(m, beta, kind, x);
                const auto closed = zakai_closed_form(m, beta, kind, x);
                const double residual = std::max({max_abs(expanded.gain - closed.gain),
                                                  max_abs(expanded.drift - closed.drift), mismatch});
                tally.record(kind == MeasurementKind::quadrature ? zakai_quadrature : zakai_counting, residual);
                rearranged = std::max(
                    rearranged, max_abs(closed.drift + reference_rate(beta, kind) * closed.gain - generator));
            }
            tally.record(rearrangement, rearranged);

            const auto p = random_polynomial(dim, rng);
            const auto q = random_polynomial(dim, rng);
            const auto r = random_polynomial(dim, rng);
            tally.record(associativity, (ito_product(ito_product(p, q), r) - ito_product(p, ito_product(q, r))).max_abs());
            tally.record(nondemolition, nondemolition_residual(x));

            const ComplexMatrix rho = random_density(dim, rng).matrix();
            tally.record(duality_quadrature, quadrature_gain_duality(m, beta, rho, x));
            tally.record(duality_counting, counting_gain_duality(m, beta, rho, x));
        }
    }
    return tally.take();
}

bool write_report(std::ostream& out, const std::vector<IdentityCheck>& checks, double tolerance) {
    bool all = true;
    char buffer[64];
    for (const auto& c : checks) {
        const bool pass = c.residual <= tolerance;
        all = all && pass;
        std::snprintf(buffer, sizeof buffer, "%.3e", c.residual);
        out << c.name << ' ' << buffer << ' ' << (pass ? "PASS" : "FAIL") << '\n';
    }
    return all;
}

}  // namespace qfilter
