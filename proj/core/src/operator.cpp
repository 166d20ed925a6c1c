#include "qfilter/operator.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>

namespace qfilter {

void require_square(const ComplexMatrix& a, const char* what) {
    if (a.rows() == 0 || a.rows() != a.cols()) {
        std::ostringstream msg;
        msg << what << " must be square and non-empty, got " << a.rows() << "x" << a.cols();
        throw DimensionError(msg.str());
    }
}

void require_same_dim(const ComplexMatrix& a, const ComplexMatrix& b) {
    require_square(a);
    require_square(b);
    if (a.rows() != b.rows()) {
        std::ostringstream msg;
        msg << "dimension mismatch: " << a.rows() << " vs " << b.rows();
        throw DimensionError(msg.str());
    }
}

ComplexMatrix identity(int dim) { return ComplexMatrix::Identity(dim, dim); }

ComplexMatrix dagger(const ComplexMatrix& a) { return a.adjoint(); }

ComplexMatrix commutator(const ComplexMatrix& a, const ComplexMatrix& b) {
    require_same_dim(a, b);
    return a * b - b * a;
}

ComplexMatrix anticommutator(const ComplexMatrix& a, const ComplexMatrix& b) {
    require_same_dim(a, b);
    return a * b + b * a;
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
    ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        }
    }
    return out;
}

ComplexMatrix hermitian_part(const ComplexMatrix& a) { return 0.5 * (a + a.adjoint()); }

complex trace(const ComplexMatrix& a) {
    require_square(a);
    return a.trace();
}

double max_abs(const ComplexMatrix& a) {
    return a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff();
}

bool is_finite(const ComplexMatrix& a) { return a.allFinite(); }

bool is_hermitian(const ComplexMatrix& a, double tol) {
    return a.rows() == a.cols() && max_abs(a - a.adjoint()) <= tol;
}

bool is_unitary(const ComplexMatrix& a, double tol) {
    if (a.rows() != a.cols()) return false;
    return max_abs(a.adjoint() * a - identity(dim_of(a))) <= tol;
}

Eigen::VectorXd hermitian_eigenvalues(const ComplexMatrix& a) {
    require_square(a);
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(hermitian_part(a), Eigen::EigenvaluesOnly);
    return solver.eigenvalues();
}

// DensityMatrix -------------------------------------------------------------

DensityMatrix::DensityMatrix(ComplexMatrix m, double positivity_tol) : m_(std::move(m)) {
    require_square(m_, "density matrix");
    if (!is_finite(m_)) throw ValidationError("density matrix has non-finite entries");
    const double herm = max_abs(m_ - m_.adjoint());
    if (herm > kHermitianTol) {
        throw ValidationError("density matrix is not Hermitian (deviation " + std::to_string(herm) + ")");
    }
    const complex tr = m_.trace();
    if (std::abs(tr - 1.0) > kTraceTol) {
        throw ValidationError("density matrix trace is " + std::to_string(tr.real()) + ", expected 1");
    }
    const double min_eig = hermitian_eigenvalues(m_).minCoeff();
    if (min_eig < -positivity_tol) {
        throw ValidationError("density matrix has negative eigenvalue " + std::to_string(min_eig));
    }
}

DensityMatrix DensityMatrix::pure(const ComplexVector& psi) {
    const double norm = psi.norm();
    if (psi.size() == 0 || !(norm > 0.0)) throw ValidationError("state vector must be non-zero");
    const ComplexVector unit = psi / norm;
    return DensityMatrix(unit * unit.adjoint());
}

DensityMatrix DensityMatrix::maximally_mixed(int dim) {
    if (dim < 1) throw DimensionError("dimension must be positive");
    return DensityMatrix(identity(dim) / static_cast<double>(dim));
}

DensityMatrix DensityMatrix::basis(int dim, int index) {
    if (dim < 1 || index < 0 || index >= dim) throw DimensionError("basis index out of range");
    ComplexMatrix m = ComplexMatrix::Zero(dim, dim);
    m(index, index) = 1.0;
    return DensityMatrix(std::move(m));
}

double DensityMatrix::purity() const { return (m_ * m_).trace().real(); }

complex expectation(const ComplexMatrix& rho, const ComplexMatrix& x) {
    require_same_dim(rho, x);
    // tr(rho X) without forming the product.
    return (rho.transpose().cwiseProduct(x)).sum();
}

complex expectation(const DensityMatrix& rho, const ComplexMatrix& x) {
    return expectation(rho.matrix(), x);
}

double trace_distance(const ComplexMatrix& rho1, const ComplexMatrix& rho2) {
    require_same_dim(rho1, rho2);
    return 0.5 * hermitian_eigenvalues(rho1 - rho2).cwiseAbs().sum();
}

double trace_distance(const DensityMatrix& rho1, const DensityMatrix& rho2) {
    return trace_distance(rho1.matrix(), rho2.matrix());
}

// Joint spectral projections ------------------------------------------------

namespace {

struct Block {
    ComplexMatrix basis;  // orthonormal columns spanning the block
    std::vector<double> values;
};

}  // namespace

SpectralDecomposition joint_spectral_projections(const std::vector<ComplexMatrix>& family) {
    if (family.empty()) throw DimensionError("joint_spectral_projections needs at least one operator");
    const int d = dim_of(family.front());
    for (std::size_t j = 0; j < family.size(); ++j) {
        require_same_dim(family.front(), family[j]);
        if (!is_hermitian(family[j], kCommutingTol)) {
            throw ValidationError("family member " + std::to_string(j) + " is not Hermitian");
        }
    }
    for (std::size_t j = 0; j < family.size(); ++j) {
        for (std::size_t k = j + 1; k < family.size(); ++k) {
            if (max_abs(family[j] * family[k] - family[k] * family[j]) > kCommutingTol) {
                throw ValidationError("family members " + std::to_string(j) + " and " +
                                      std::to_string(k) + " do not commute");
            }
        }
    }

    std::vector<Block> blocks{{identity(d), {}}};
    for (const auto& a : family) {
        std::vector<Block> refined;
        for (const auto& block : blocks) {
            // `a` leaves the block invariant, so its compression is Hermitian
            // and its eigenvectors lift to joint eigenvectors.
            const ComplexMatrix compressed = block.basis.adjoint() * a * block.basis;
            Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(hermitian_part(compressed));
            const Eigen::VectorXd& ev = solver.eigenvalues();
            const ComplexMatrix lifted = block.basis * solver.eigenvectors();
            Eigen::Index start = 0;
            for (Eigen::Index i = 1; i <= ev.size(); ++i) {
                if (i == ev.size() || ev(i) - ev(i - 1) > kEigenClusterTol) {
                    const Eigen::Index count = i - start;
                    Block next{lifted.middleCols(start, count), block.values};
                    next.values.push_back(ev.segment(start, count).mean());
                    refined.push_back(std::move(next));
                    start = i;
                }
            }
        }
        blocks = std::move(refined);
    }

    SpectralDecomposition out;
    out.projections.reserve(blocks.size());
    out.eigenvalues.reserve(blocks.size());
    for (auto& block : blocks) {
        out.projections.push_back(block.basis * block.basis.adjoint());
        out.eigenvalues.push_back(std::move(block.values));
    }
    return out;
}

// Qubit operators -----------------------------------------------------------

namespace pauli {

ComplexMatrix sigma_x() {
    ComplexMatrix m(2, 2);
    m << 0.0, 1.0, 1.0, 0.0;
    return m;
}

ComplexMatrix sigma_y() {
    ComplexMatrix m(2, 2);
    m << 0.0, -kI, kI, 0.0;
    return m;
}

ComplexMatrix sigma_z() {
    ComplexMatrix m(2, 2);
    m << 1.0, 0.0, 0.0, -1.0;
    return m;
}

ComplexMatrix sigma_minus() {
    ComplexMatrix m = ComplexMatrix::Zero(2, 2);
    m(1, 0) = 1.0;
    return m;
}

ComplexMatrix sigma_plus() {
    ComplexMatrix m = ComplexMatrix::Zero(2, 2);
    m(0, 1) = 1.0;
    return m;
}

ComplexMatrix projector_excited() {
    ComplexMatrix m = ComplexMatrix::Zero(2, 2);
    m(0, 0) = 1.0;
    return m;
}

ComplexMatrix projector_ground() {
    ComplexMatrix m = ComplexMatrix::Zero(2, 2);
    m(1, 1) = 1.0;
    return m;
}

}  // namespace pauli

}  // namespace qfilter
