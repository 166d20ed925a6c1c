#include "qfilter/ito.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <optional>

namespace qfilter {

IncrementPolynomial IncrementPolynomial::zero(int dim) {
    const ComplexMatrix z = ComplexMatrix::Zero(dim, dim);
    return {z, z, z, z};
}

IncrementPolynomial IncrementPolynomial::basis(Increment which, const ComplexMatrix& coeff) {
    require_square(coeff);
    auto p = zero(dim_of(coeff));
    p[which] = coeff;
    return p;
}

ComplexMatrix& IncrementPolynomial::operator[](Increment which) {
    switch (which) {
        case Increment::dt: return dt;
        case Increment::dB: return dB;
        case Increment::dB_dag: return dB_dag;
        case Increment::dLambda: return dLambda;
    }
    return dt;
}

const ComplexMatrix& IncrementPolynomial::operator[](Increment which) const {
    return const_cast<IncrementPolynomial&>(*this)[which];
}

IncrementPolynomial IncrementPolynomial::adjoint() const {
    return {dt.adjoint(), dB_dag.adjoint(), dB.adjoint(), dLambda.adjoint()};
}

IncrementPolynomial& IncrementPolynomial::operator+=(const IncrementPolynomial& other) {
    require_same_dim(dt, other.dt);
    dt += other.dt;
    dB += other.dB;
    dB_dag += other.dB_dag;
    dLambda += other.dLambda;
    return *this;
}

double IncrementPolynomial::max_abs() const {
    return std::max({qfilter::max_abs(dt), qfilter::max_abs(dB), qfilter::max_abs(dB_dag),
                     qfilter::max_abs(dLambda)});
}

IncrementPolynomial operator+(IncrementPolynomial a, const IncrementPolynomial& b) {
    a += b;
    return a;
}

IncrementPolynomial operator-(IncrementPolynomial a, const IncrementPolynomial& b) {
    a += complex{-1.0, 0.0} * b;
    return a;
}

IncrementPolynomial operator*(const ComplexMatrix& a, const IncrementPolynomial& p) {
    require_same_dim(a, p.dt);
    return {a * p.dt, a * p.dB, a * p.dB_dag, a * p.dLambda};
}

IncrementPolynomial operator*(const IncrementPolynomial& p, const ComplexMatrix& a) {
    require_same_dim(a, p.dt);
    return {p.dt * a, p.dB * a, p.dB_dag * a, p.dLambda * a};
}

IncrementPolynomial operator*(complex s, const IncrementPolynomial& p) {
    return {s * p.dt, s * p.dB, s * p.dB_dag, s * p.dLambda};
}

namespace {

constexpr std::array<Increment, 4> kIncrements{Increment::dt, Increment::dB, Increment::dB_dag,
                                               Increment::dLambda};

// Row = left factor, column = right factor.
std::optional<Increment> table(Increment left, Increment right) {
    if (left == Increment::dB && right == Increment::dB_dag) return Increment::dt;
    if (left == Increment::dB && right == Increment::dLambda) return Increment::dB;
    if (left == Increment::dLambda && right == Increment::dLambda) return Increment::dLambda;
    if (left == Increment::dLambda && right == Increment::dB_dag) return Increment::dB_dag;
    return std::nullopt;
}

}  // namespace

IncrementPolynomial ito_product(const IncrementPolynomial& p, const IncrementPolynomial& q) {
    require_same_dim(p.dt, q.dt);
    auto out = IncrementPolynomial::zero(p.dim());
    for (auto left : kIncrements) {
        for (auto right : kIncrements) {
            if (auto target = table(left, right)) out[*target] += p[left] * q[right];
        }
    }
    return out;
}

ComplexMatrix coherent_expectation(const IncrementPolynomial& p, complex beta) {
    return p.dt + beta * p.dB + std::conj(beta) * p.dB_dag + std::norm(beta) * p.dLambda;
}

IncrementPolynomial langevin_increment(const HPModel& m, const ComplexMatrix& x) {
    return {evans_hudson(m, 0, 0, x), evans_hudson(m, 0, 1, x), evans_hudson(m, 1, 0, x),
            evans_hudson(m, 1, 1, x)};
}

std::pair<IncrementPolynomial, IncrementPolynomial> output_increments(const HPModel& m) {
    const int d = m.dim();
    const ComplexMatrix z = ComplexMatrix::Zero(d, d);
    const ComplexMatrix ldag = m.L().adjoint();
    IncrementPolynomial b_out{m.L(), m.S(), z, z};
    IncrementPolynomial lambda_out{ldag * m.L(), m.S().adjoint() * m.L(), ldag * m.S(), identity(d)};
    return {std::move(b_out), std::move(lambda_out)};
}

double verify_generator(const HPModel& m, complex beta, const ComplexMatrix& x) {
    return max_abs(coherent_expectation(langevin_increment(m, x), beta) - heisenberg_generator(m, beta, x));
}

GirsanovCoefficients girsanov_coefficients(const HPModel& m, complex beta, MeasurementKind kind,
                                           double beta_min) {
    const int d = m.dim();
    const ComplexMatrix& l = m.L();
    const ComplexMatrix ldag = l.adjoint();
    GirsanovCoefficients out;
    out.tilde_coupling = l + (m.S() - identity(d)) * beta;
    const ComplexMatrix base = -0.5 * (ldag * l) - kI * m.H() - ldag * m.S() * beta;
    if (kind == MeasurementKind::quadrature) {
        out.tilde_drift = base - out.tilde_coupling * beta;
        out.record_coefficient = out.tilde_coupling;
    } else {
        if (std::abs(beta) < beta_min) {
            throw NumericalError("counting reference measure needs |beta| >= " + std::to_string(beta_min) +
                                 ", got " + std::to_string(std::abs(beta)));
        }
        out.tilde_drift = base;
        out.record_coefficient = out.tilde_coupling / beta;
    }
    return out;
}

GirsanovCoefficients girsanov_coefficients(const HPModel& m, const CoherentInput& beta, double t,
                                           MeasurementKind kind, double beta_min) {
    return girsanov_coefficients(m, beta(t), kind, beta_min);
}

std::pair<ZakaiCoefficients, double> zakai_from_ito(const HPModel& m, complex beta,
                                                    MeasurementKind kind, const ComplexMatrix& x) {
    require_same_dim(m.S(), x);
    const auto g = girsanov_coefficients(m, beta, kind);
    const Increment record = kind == MeasurementKind::quadrature ? Increment::dB_dag : Increment::dLambda;

    // dF for F = I at the current instant; dY_in = dB + dB† or dΛ.
    auto df = IncrementPolynomial::basis(Increment::dt, g.tilde_drift);
    df[record] = g.record_coefficient;
    if (kind == MeasurementKind::quadrature) df.dB = g.record_coefficient;

    const IncrementPolynomial df_dag = df.adjoint();
    const IncrementPolynomial total = df_dag * x + x * df + ito_product(df_dag * x, df);

    ZakaiCoefficients out;
    out.drift = total.dt;
    double mismatch = 0.0;
    if (kind == MeasurementKind::quadrature) {
        out.gain = total.dB;
        mismatch = std::max(qfilter::max_abs(total.dB - total.dB_dag), qfilter::max_abs(total.dLambda));
    } else {
        out.gain = total.dLambda;
        mismatch = std::max(qfilter::max_abs(total.dB), qfilter::max_abs(total.dB_dag));
    }
    return {std::move(out), mismatch};
}

ZakaiCoefficients zakai_closed_form(const HPModel& m, complex beta, MeasurementKind kind,
                                    const ComplexMatrix& x) {
    const auto g = girsanov_coefficients(m, beta, kind);
    const ComplexMatrix& lt = g.tilde_coupling;
    const ComplexMatrix& kt = g.tilde_drift;
    const ComplexMatrix ltd = lt.adjoint();
    ZakaiCoefficients out;
    if (kind == MeasurementKind::quadrature) {
        out.gain = x * lt + ltd * x;
        out.drift = ltd * x * lt + x * kt + kt.adjoint() * x;
    } else {
        out.gain = (ltd * x * lt + std::conj(beta) * x * lt + beta * ltd * x) / std::norm(beta);
        out.drift = x * kt + kt.adjoint() * x;
    }
    return out;
}

double reference_rate(complex beta, MeasurementKind kind) {
    return kind == MeasurementKind::quadrature ? 2.0 * beta.real() : std::norm(beta);
}

double nondemolition_residual(const ComplexMatrix& x) {
    require_square(x);
    const int d = dim_of(x);
    // Two-level stand-ins for the field increments: dB lowers, dB† raises,
    // dΛ counts, dt is scalar.
    ComplexMatrix lower = ComplexMatrix::Zero(2, 2);
    lower(0, 1) = 1.0;
    ComplexMatrix number = ComplexMatrix::Zero(2, 2);
    number(1, 1) = 1.0;
    const std::array<ComplexMatrix, 4> field{identity(2), lower, ComplexMatrix(lower.adjoint()), number};

    const ComplexMatrix system = kron(x, identity(2));
    double residual = 0.0;
    for (const auto& e : field) {
        const ComplexMatrix inc = kron(identity(d), e);
        residual = std::max(residual, max_abs(system * inc - inc * system));
    }
    return residual;
}

}  // namespace qfilter
