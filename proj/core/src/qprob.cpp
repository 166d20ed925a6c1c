#include "qfilter/qprob.hpp"

#include <algorithm>
#include <cmath>

namespace qfilter {

MeasurementAlgebra::MeasurementAlgebra(std::vector<ComplexMatrix> generators)
    : generators_(std::move(generators)), spectrum_(joint_spectral_projections(generators_)) {}

MeasurementAlgebra MeasurementAlgebra::rotated(const ComplexMatrix& u) const {
    std::vector<ComplexMatrix> rotated_gens;
    rotated_gens.reserve(generators_.size());
    for (const auto& y : generators_) {
        require_same_dim(y, u);
        rotated_gens.push_back(hermitian_part(u.adjoint() * y * u));
    }
    return MeasurementAlgebra(std::move(rotated_gens));
}

bool in_commutant(const ComplexMatrix& x, const MeasurementAlgebra& algebra) {
    for (const auto& p : algebra.projections()) {
        require_same_dim(x, p);
        if (max_abs(x * p - p * x) > kCommutingTol) return false;
    }
    return true;
}

namespace {

void require_commutant(const ComplexMatrix& x, const MeasurementAlgebra& algebra, const char* name) {
    if (!in_commutant(x, algebra)) {
        throw ValidationError(std::string(name) + " is not in the commutant of the measurement algebra",
                              name);
    }
}

// tr(rho P_k A) for each projection.
std::vector<complex> weights(const ComplexMatrix& a, const MeasurementAlgebra& algebra,
                             const ComplexMatrix& rho) {
    std::vector<complex> w;
    w.reserve(algebra.projections().size());
    for (const auto& p : algebra.projections()) w.push_back(expectation(rho, p * a));
    return w;
}

ComplexMatrix combine(const std::vector<complex>& coeffs, const MeasurementAlgebra& algebra) {
    const int d = algebra.dim();
    ComplexMatrix out = ComplexMatrix::Zero(d, d);
    for (std::size_t k = 0; k < coeffs.size(); ++k) out += coeffs[k] * algebra.projections()[k];
    return out;
}

ComplexMatrix conditional_in(const ComplexMatrix& x, const MeasurementAlgebra& algebra,
                             const ComplexMatrix& rho) {
    const auto num = weights(x, algebra, rho);
    std::vector<complex> coeffs(num.size(), complex{0.0, 0.0});
    for (std::size_t k = 0; k < num.size(); ++k) {
        const double mass = expectation(rho, algebra.projections()[k]).real();
        if (mass > kNullWeight) coeffs[k] = num[k] / mass;
    }
    return combine(coeffs, algebra);
}

}  // namespace

ComplexMatrix conditional_expectation(const ComplexMatrix& x, const MeasurementAlgebra& algebra,
                                      const QuantumState& state) {
    require_same_dim(x, state.matrix());
    require_commutant(x, algebra, "X");
    return conditional_in(x, algebra, state.matrix());
}

double verify_defining_property(const ComplexMatrix& x, const MeasurementAlgebra& algebra,
                                const QuantumState& state) {
    const ComplexMatrix ex = conditional_expectation(x, algebra, state);
    const ComplexMatrix& rho = state.matrix();
    const auto& gens = algebra.generators();

    std::vector<ComplexMatrix> monomials{identity(state.dim())};
    for (const auto& a : gens) monomials.push_back(a);
    for (const auto& a : gens) {
        for (const auto& b : gens) monomials.push_back(a * b);
    }

    double residual = 0.0;
    for (const auto& y : monomials) {
        residual = std::max(residual, std::abs(expectation(rho, ex * y) - expectation(rho, x * y)));
    }
    return residual;
}

double state_norm(const ComplexMatrix& a, const QuantumState& state) {
    return std::sqrt(std::max(0.0, expectation(state, a.adjoint() * a).real()));
}

RotatedConditional rotated_conditional(const ComplexMatrix& x, const MeasurementAlgebra& algebra,
                                       const QuantumState& state, const ComplexMatrix& u) {
    require_same_dim(x, u);
    if (!is_unitary(u)) throw ValidationError("U is not unitary", "U");
    require_commutant(x, algebra, "X");

    const ComplexMatrix rotated_x = u.adjoint() * x * u;
    const MeasurementAlgebra rotated_algebra = algebra.rotated(u);

    RotatedConditional out;
    out.lhs = conditional_expectation(rotated_x, rotated_algebra, state);
    const QuantumState moved(hermitian_part(u * state.matrix() * u.adjoint()));
    out.rhs = u.adjoint() * conditional_expectation(x, algebra, moved) * u;
    return out;
}

ComplexMatrix bayes_conditional(const ComplexMatrix& x, const ComplexMatrix& f,
                                const MeasurementAlgebra& algebra, const QuantumState& state) {
    require_same_dim(x, f);
    require_same_dim(f, state.matrix());
    require_commutant(f, algebra, "F");
    require_commutant(x, algebra, "X");
    const ComplexMatrix fdf = f.adjoint() * f;
    if (std::abs(expectation(state, fdf) - 1.0) > 1e-9) {
        throw ValidationError("F must satisfy tr(rho F†F) = 1", "F");
    }

    const ComplexMatrix& rho = state.matrix();
    const auto num = weights(f.adjoint() * x * f, algebra, rho);
    const auto den = weights(fdf, algebra, rho);
    std::vector<complex> coeffs(num.size(), complex{0.0, 0.0});
    for (std::size_t k = 0; k < num.size(); ++k) {
        const double mass = expectation(rho, algebra.projections()[k]).real();
        if (mass <= kNullWeight) continue;
        // The 1/mass factors of numerator and denominator cancel.
        if (std::abs(den[k]) <= kNullWeight) {
            throw NumericalError("Bayes denominator vanishes on a projection of non-zero weight");
        }
        coeffs[k] = num[k] / den[k];
    }
    return combine(coeffs, algebra);
}

}  // namespace qfilter
