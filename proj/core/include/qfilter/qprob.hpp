#pragma once

// Finite-dimensional quantum probability: conditioning an observable on a
// commutative measurement algebra.
//
// A measurement algebra vN{Y_1, ..., Y_n} generated by commuting Hermitian
// observables is represented by its joint spectral projections P_k. For X in
// the commutant, the conditional expectation is
//
//     E[X | M] = sum_k  tr(rho P_k X) / tr(rho P_k) * P_k,
//
// with coefficient 0 on any projection of weight tr(rho P_k) <= 1e-12.

#include <vector>

#include "qfilter/operator.hpp"

namespace qfilter {

inline constexpr double kNullWeight = 1e-12;

class MeasurementAlgebra {
public:
    /// Throws ValidationError if the generators do not pairwise commute.
    explicit MeasurementAlgebra(std::vector<ComplexMatrix> generators);

    const std::vector<ComplexMatrix>& generators() const noexcept { return generators_; }
    const SpectralDecomposition& spectrum() const noexcept { return spectrum_; }
    const std::vector<ComplexMatrix>& projections() const noexcept { return spectrum_.projections; }
    int dim() const { return spectrum_.dim(); }

    /// The algebra U† M U.
    MeasurementAlgebra rotated(const ComplexMatrix& u) const;

private:
    std::vector<ComplexMatrix> generators_;
    SpectralDecomposition spectrum_;
};

using QuantumState = DensityMatrix;

/// True iff ‖[X, P_k]‖_max <= 1e-9 for every joint projection.
bool in_commutant(const ComplexMatrix& x, const MeasurementAlgebra& algebra);

/// Throws ValidationError if X is not in the commutant.
ComplexMatrix conditional_expectation(const ComplexMatrix& x, const MeasurementAlgebra& algebra,
                                      const QuantumState& state);

/// max over monomials Y of degree <= 2 in the generators (the identity
/// included) of |tr(rho E[X|M] Y) - tr(rho X Y)|.
double verify_defining_property(const ComplexMatrix& x, const MeasurementAlgebra& algebra,
                                const QuantumState& state);

/// ‖A‖_rho = sqrt(tr(rho A† A)).
double state_norm(const ComplexMatrix& a, const QuantumState& state);

struct RotatedConditional {
    ComplexMatrix lhs;  ///< E[U†XU | U†MU] in the state rho
    ComplexMatrix rhs;  ///< U† E~[X | M] U, E~ having density U rho U†

    double residual() const { return max_abs(lhs - rhs); }
};

/// Both sides of the unitary-rotation identity for conditional expectations.
/// Throws ValidationError if U is not unitary within 1e-9.
RotatedConditional rotated_conditional(const ComplexMatrix& x, const MeasurementAlgebra& algebra,
                                       const QuantumState& state, const ComplexMatrix& u);

/// Quantum Bayes formula: E[F†XF | M] / E[F†F | M], projection-wise.
/// Requires F and X in the commutant and tr(rho F†F) = 1 within 1e-9.
/// Throws NumericalError if a projection with non-null rho-weight has a zero
/// denominator coefficient.
ComplexMatrix bayes_conditional(const ComplexMatrix& x, const ComplexMatrix& f,
                                const MeasurementAlgebra& algebra, const QuantumState& state);

}  // namespace qfilter
