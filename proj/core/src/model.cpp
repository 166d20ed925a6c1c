#include "qfilter/model.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace qfilter {

std::string_view to_string(MeasurementKind kind) {
    return kind == MeasurementKind::quadrature ? "quadrature" : "counting";
}

MeasurementKind parse_measurement_kind(std::string_view text) {
    if (text == "quadrature") return MeasurementKind::quadrature;
    if (text == "counting") return MeasurementKind::counting;
    throw ValidationError("unknown measurement kind '" + std::string(text) + "'", "measurement");
}

// HPModel -------------------------------------------------------------------

HPModel::HPModel(ComplexMatrix scattering, ComplexMatrix coupling, ComplexMatrix hamiltonian)
    : s_(std::move(scattering)), l_(std::move(coupling)), h_(std::move(hamiltonian)) {
    require_square(s_, "S");
    require_same_dim(s_, l_);
    require_same_dim(s_, h_);
    if (!is_finite(s_) || !is_finite(l_) || !is_finite(h_)) {
        throw ValidationError("model operators must be finite");
    }
    if (!is_unitary(s_, kTol)) throw ValidationError("S is not unitary", "S");
    if (!is_hermitian(h_, kTol)) throw ValidationError("H is not Hermitian", "H");
}

// CoherentInput -------------------------------------------------------------

CoherentInput::CoherentInput(Kind kind) : kind_(std::move(kind)) {
    if (const auto* s = std::get_if<Samples>(&kind_)) {
        if (s->values.empty()) throw ValidationError("sampled beta needs at least one value", "values");
        if (!(s->dt > 0.0)) throw ValidationError("sampled beta needs dt > 0", "dt");
    }
}

complex CoherentInput::operator()(double t) const {
    struct Visitor {
        double t;
        complex operator()(const Constant& c) const { return c.value; }
        complex operator()(const Samples& s) const {
            const double pos = std::floor((t - s.t0) / s.dt);
            const auto last = static_cast<double>(s.values.size() - 1);
            const auto index = static_cast<std::size_t>(std::clamp(pos, 0.0, last));
            return s.values[index];
        }
        complex operator()(const Sinusoid& s) const {
            return s.amplitude * std::exp(kI * (s.omega * t)) + s.offset;
        }
    };
    return std::visit(Visitor{t}, kind_);
}

double CoherentInput::intensity_integral(double t0, double t1) const {
    if (t1 <= t0) return 0.0;
    if (const auto* c = std::get_if<Constant>(&kind_)) return std::norm(c->value) * (t1 - t0);
    if (const auto* s = std::get_if<Sinusoid>(&kind_)) {
        const double flat = (std::norm(s->amplitude) + std::norm(s->offset)) * (t1 - t0);
        const complex cross = s->amplitude * std::conj(s->offset);
        if (s->omega == 0.0) return flat + 2.0 * cross.real() * (t1 - t0);
        const complex osc = (std::exp(kI * (s->omega * t1)) - std::exp(kI * (s->omega * t0))) / (kI * s->omega);
        return flat + 2.0 * (cross * osc).real();
    }
    const auto& s = std::get<Samples>(kind_);
    const double n = static_cast<double>(s.values.size());
    double total = 0.0;
    // Held values before and after the sampled window.
    const double window_end = s.t0 + n * s.dt;
    if (t0 < s.t0) total += std::norm(s.values.front()) * (std::min(t1, s.t0) - t0);
    if (t1 > window_end) total += std::norm(s.values.back()) * (t1 - std::max(t0, window_end));
    for (std::size_t k = 0; k < s.values.size(); ++k) {
        const double a = std::max(t0, s.t0 + static_cast<double>(k) * s.dt);
        const double b = std::min(t1, s.t0 + static_cast<double>(k + 1) * s.dt);
        if (b > a) total += std::norm(s.values[k]) * (b - a);
    }
    return total;
}

// Modulated operators -------------------------------------------------------

ModulatedOperators modulated_operators(const HPModel& m, complex beta) {
    return {modulated_coupling(m, beta), modulated_hamiltonian(m, beta)};
}

ComplexMatrix modulated_coupling(const HPModel& m, complex beta) { return m.S() * beta + m.L(); }

ComplexMatrix modulated_coupling(const HPModel& m, const CoherentInput& beta, double t) {
    return modulated_coupling(m, beta(t));
}

ComplexMatrix modulated_hamiltonian(const HPModel& m, complex beta) {
    const ComplexMatrix ldag_s = m.L().adjoint() * m.S();
    // (1/2i)(beta L†S - beta* S†L); the bracket is anti-Hermitian.
    return m.H() + (beta * ldag_s - std::conj(beta) * ldag_s.adjoint()) / (2.0 * kI);
}

ComplexMatrix modulated_hamiltonian(const HPModel& m, const CoherentInput& beta, double t) {
    return modulated_hamiltonian(m, beta(t));
}

// Generators ----------------------------------------------------------------

ComplexMatrix lindblad_generator(const ComplexMatrix& coupling, const ComplexMatrix& hamiltonian,
                                 const ComplexMatrix& x) {
    require_same_dim(coupling, x);
    require_same_dim(hamiltonian, x);
    const ComplexMatrix ldag = coupling.adjoint();
    return 0.5 * ldag * (x * coupling - coupling * x) + 0.5 * (ldag * x - x * ldag) * coupling -
           kI * (x * hamiltonian - hamiltonian * x);
}

ComplexMatrix evans_hudson(const HPModel& m, int mu, int nu, const ComplexMatrix& x) {
    require_same_dim(m.S(), x);
    const ComplexMatrix& s = m.S();
    const ComplexMatrix& l = m.L();
    if (mu == 1 && nu == 1) return s.adjoint() * x * s - x;
    if (mu == 1 && nu == 0) return s.adjoint() * (x * l - l * x);
    if (mu == 0 && nu == 1) return (l.adjoint() * x - x * l.adjoint()) * s;
    if (mu == 0 && nu == 0) return lindblad_generator(l, m.H(), x);
    throw ValidationError("Evans-Hudson index must be in {0,1}^2, got (" + std::to_string(mu) + "," +
                          std::to_string(nu) + ")", "index");
}

ComplexMatrix heisenberg_generator(const HPModel& m, complex beta, const ComplexMatrix& x) {
    return evans_hudson(m, 0, 0, x) + std::conj(beta) * evans_hudson(m, 1, 0, x) +
           beta * evans_hudson(m, 0, 1, x) + std::norm(beta) * evans_hudson(m, 1, 1, x);
}

ComplexMatrix heisenberg_generator(const HPModel& m, const CoherentInput& beta, double t,
                                   const ComplexMatrix& x) {
    return heisenberg_generator(m, beta(t), x);
}

ComplexMatrix adjoint_generator(const ModulatedOperators& ops, const ComplexMatrix& rho) {
    require_same_dim(ops.coupling, rho);
    const ComplexMatrix& j = ops.coupling;
    const ComplexMatrix& h = ops.hamiltonian;
    const ComplexMatrix jdj = j.adjoint() * j;
    return -kI * (h * rho - rho * h) + j * rho * j.adjoint() - 0.5 * (jdj * rho + rho * jdj);
}

ComplexMatrix adjoint_generator(const HPModel& m, complex beta, const ComplexMatrix& rho) {
    return adjoint_generator(modulated_operators(m, beta), rho);
}

ComplexMatrix adjoint_generator(const HPModel& m, const CoherentInput& beta, double t,
                                const ComplexMatrix& rho) {
    return adjoint_generator(m, beta(t), rho);
}

}  // namespace qfilter
