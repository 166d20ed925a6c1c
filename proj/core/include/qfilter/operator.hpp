#pragma once

// Dense complex linear algebra for small system Hilbert spaces.
//
// Operators are plain Eigen::MatrixXcd values. Basis convention for a qubit
// is (|e>, |g>): sigma_z|e> = +|e>, sigma_minus|e> = |g>.

#include <complex>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "qfilter/errors.hpp"

namespace qfilter {

using complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

inline constexpr complex kI{0.0, 1.0};

// Shape helpers -------------------------------------------------------------

/// Throws DimensionError unless `a` is square with at least one row.
void require_square(const ComplexMatrix& a, const char* what = "matrix");

/// Throws DimensionError unless `a` and `b` are square of the same size.
void require_same_dim(const ComplexMatrix& a, const ComplexMatrix& b);

inline int dim_of(const ComplexMatrix& a) { return static_cast<int>(a.rows()); }

// Elementary algebra --------------------------------------------------------

ComplexMatrix identity(int dim);
ComplexMatrix dagger(const ComplexMatrix& a);
ComplexMatrix commutator(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix anticommutator(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix hermitian_part(const ComplexMatrix& a);

complex trace(const ComplexMatrix& a);

/// Largest entry modulus, the `‖·‖_max` used for every tolerance check.
double max_abs(const ComplexMatrix& a);

bool is_finite(const ComplexMatrix& a);
bool is_hermitian(const ComplexMatrix& a, double tol = 1e-9);
bool is_unitary(const ComplexMatrix& a, double tol = 1e-9);

/// Eigenvalues of the Hermitian part of `a`, ascending.
Eigen::VectorXd hermitian_eigenvalues(const ComplexMatrix& a);

// Density matrices ----------------------------------------------------------

/// A validated density matrix: Hermitian and unit-trace within 1e-10, all
/// eigenvalues at least `-positivity_tol`.
class DensityMatrix {
public:
    static constexpr double kHermitianTol = 1e-10;
    static constexpr double kTraceTol = 1e-10;
    static constexpr double kPositivityTol = 1e-9;

    explicit DensityMatrix(ComplexMatrix m, double positivity_tol = kPositivityTol);

    static DensityMatrix pure(const ComplexVector& psi);
    static DensityMatrix maximally_mixed(int dim);
    /// Projector on basis state `index`.
    static DensityMatrix basis(int dim, int index);

    const ComplexMatrix& matrix() const noexcept { return m_; }
    int dim() const noexcept { return static_cast<int>(m_.rows()); }
    double purity() const;

private:
    ComplexMatrix m_;
};

/// An observable with a display name, used for CSV columns and reports.
struct NamedObservable {
    std::string name;
    ComplexMatrix matrix;
};

/// tr(rho X).
complex expectation(const DensityMatrix& rho, const ComplexMatrix& x);
complex expectation(const ComplexMatrix& rho, const ComplexMatrix& x);

/// Half the trace norm of rho1 - rho2.
double trace_distance(const ComplexMatrix& rho1, const ComplexMatrix& rho2);
double trace_distance(const DensityMatrix& rho1, const DensityMatrix& rho2);

// Spectral projections ------------------------------------------------------

/// Joint eigenprojections of a commuting Hermitian family.
/// `eigenvalues[k][j]` is the eigenvalue of family member j on projections[k].
struct SpectralDecomposition {
    std::vector<ComplexMatrix> projections;
    std::vector<std::vector<double>> eigenvalues;

    int dim() const { return projections.empty() ? 0 : dim_of(projections.front()); }
    std::size_t size() const { return projections.size(); }
};

inline constexpr double kCommutingTol = 1e-9;
inline constexpr double kEigenClusterTol = 1e-8;

/// Splits C^d into joint eigenspaces of `family`. Eigenvalues closer than
/// 1e-8 are treated as one degenerate eigenspace. Throws ValidationError for
/// non-Hermitian or non-commuting input (tolerance 1e-9 on ‖[A,B]‖_max).
SpectralDecomposition joint_spectral_projections(const std::vector<ComplexMatrix>& family);

// Standard qubit operators --------------------------------------------------

namespace pauli {
ComplexMatrix sigma_x();
ComplexMatrix sigma_y();
ComplexMatrix sigma_z();
/// |g><e|, lowering.
ComplexMatrix sigma_minus();
/// |e><g|, raising.
ComplexMatrix sigma_plus();
/// |e><e|
ComplexMatrix projector_excited();
/// |g><g|
ComplexMatrix projector_ground();
}  // namespace pauli

}  // namespace qfilter
