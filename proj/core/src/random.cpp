#include "qfilter/random.hpp"

#include <cmath>

namespace qfilter {

ComplexMatrix random_complex_matrix(int dim, Rng& rng) {
    std::normal_distribution<double> normal(0.0, 1.0);
    ComplexMatrix m(dim, dim);
    for (int i = 0; i < dim; ++i) {
        for (int j = 0; j < dim; ++j) {
            const double re = normal(rng);
            const double im = normal(rng);
            m(i, j) = complex(re, im);
        }
    }
    return m;
}

ComplexMatrix random_hermitian(int dim, Rng& rng) {
    return hermitian_part(random_complex_matrix(dim, rng));
}

ComplexMatrix random_unitary(int dim, Rng& rng) {
    const ComplexMatrix g = random_complex_matrix(dim, rng);
    Eigen::HouseholderQR<ComplexMatrix> qr(g);
    ComplexMatrix q = qr.householderQ() * identity(dim);
    const ComplexMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int j = 0; j < dim; ++j) {
        const complex diag = r(j, j);
        const double mod = std::abs(diag);
        if (mod > 0.0) q.col(j) *= diag / mod;
    }
    return q;
}

DensityMatrix random_density(int dim, Rng& rng) {
    const ComplexMatrix g = random_complex_matrix(dim, rng);
    ComplexMatrix rho = g * g.adjoint();
    rho /= rho.trace().real();
    return DensityMatrix(hermitian_part(rho));
}

complex random_complex(Rng& rng, double scale) {
    std::normal_distribution<double> normal(0.0, scale);
    const double re = normal(rng);
    const double im = normal(rng);
    return {re, im};
}

std::vector<ComplexMatrix> random_commuting_family(int dim, int count, Rng& rng) {
    const ComplexMatrix u = random_unitary(dim, rng);
    std::uniform_int_distribution<int> palette(-2, 2);
    std::vector<ComplexMatrix> family;
    family.reserve(count);
    for (int k = 0; k < count; ++k) {
        Eigen::VectorXcd diag(dim);
        for (int i = 0; i < dim; ++i) diag(i) = static_cast<double>(palette(rng));
        family.push_back(hermitian_part(u * diag.asDiagonal() * u.adjoint()));
    }
    return family;
}

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

}  // namespace qfilter
