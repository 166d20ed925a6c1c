#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "qfilter/operator.hpp"
#include "qfilter/random.hpp"

using namespace qfilter;

namespace {

ComplexMatrix diag(std::initializer_list<double> values) {
    ComplexVector v(static_cast<Eigen::Index>(values.size()));
    Eigen::Index i = 0;
    for (double x : values) v(i++) = x;
    return v.asDiagonal();
}

}  // namespace

TEST_CASE("commutator of Pauli matrices") {
    CHECK(max_abs(commutator(pauli::sigma_x(), pauli::sigma_y()) - 2.0 * kI * pauli::sigma_z()) == 0.0);
    Rng rng(1);
    const ComplexMatrix a = random_complex_matrix(3, rng);
    CHECK(max_abs(commutator(a, a)) == 0.0);
    CHECK(max_abs(commutator(pauli::sigma_z(), pauli::sigma_plus()) - 2.0 * pauli::sigma_plus()) == 0.0);
}

TEST_CASE("raising operator maps ground to excited") {
    const ComplexMatrix sp = pauli::sigma_plus();
    CHECK(sp(0, 1) == complex(1.0, 0.0));
    CHECK(max_abs(sp - pauli::sigma_minus().adjoint()) == 0.0);
}

TEST_CASE("commutator rejects mismatched dimensions") {
    CHECK_THROWS_AS(commutator(identity(2), identity(3)), DimensionError);
    CHECK_THROWS_AS(require_square(ComplexMatrix::Zero(2, 3)), DimensionError);
}

TEST_CASE("expectation values") {
    Rng rng(2);
    const DensityMatrix rho = random_density(3, rng);
    CHECK(std::abs(expectation(rho, identity(3)) - 1.0) < 1e-12);
    CHECK(std::abs(expectation(DensityMatrix::basis(2, 0), pauli::sigma_z()) - 1.0) < 1e-15);
    CHECK(std::abs(expectation(DensityMatrix::maximally_mixed(2), pauli::sigma_x())) < 1e-15);
    CHECK_THROWS_AS(expectation(rho, identity(2)), DimensionError);
}

TEST_CASE("expectation of Hermitian observables is real") {
    Rng rng(3);
    for (int i = 0; i < 50; ++i) {
        const int d = 2 + i % 7;
        const DensityMatrix rho = random_density(d, rng);
        CHECK(std::abs(expectation(rho, random_hermitian(d, rng)).imag()) <= 1e-10);
    }
}

TEST_CASE("adjoint is an involution") {
    Rng rng(4);
    const ComplexMatrix a = random_complex_matrix(5, rng);
    CHECK((dagger(dagger(a)).array() == a.array()).all());
}

TEST_CASE("trace is cyclic") {
    Rng rng(5);
    for (int d = 1; d <= 16; ++d) {
        const ComplexMatrix a = random_complex_matrix(d, rng);
        const ComplexMatrix b = random_complex_matrix(d, rng);
        const ComplexMatrix c = random_complex_matrix(d, rng);
        const double scale = a.operatorNorm() * b.operatorNorm() * c.operatorNorm();
        CHECK(std::abs(trace(a * b * c) - trace(c * a * b)) <= 1e-12 * scale);
    }
}

TEST_CASE("density matrix validation") {
    CHECK_NOTHROW(DensityMatrix(diag({0.25, 0.75})));
    CHECK_THROWS_AS(DensityMatrix(diag({0.5, 0.6})), ValidationError);
    CHECK_THROWS_AS(DensityMatrix(diag({1.5, -0.5})), ValidationError);
    ComplexMatrix skew = diag({0.5, 0.5});
    skew(0, 1) = 0.1;
    CHECK_THROWS_AS(DensityMatrix{skew}, ValidationError);
    CHECK_THROWS_AS(DensityMatrix(ComplexMatrix::Zero(2, 3)), DimensionError);
    CHECK(DensityMatrix::basis(3, 1).purity() == doctest::Approx(1.0));
    CHECK(DensityMatrix::maximally_mixed(4).purity() == doctest::Approx(0.25));
}

TEST_CASE("joint spectral projections of a single Pauli matrix") {
    const auto decomposition = joint_spectral_projections({pauli::sigma_z()});
    REQUIRE(decomposition.size() == 2);
    bool saw_excited = false;
    bool saw_ground = false;
    for (const auto& p : decomposition.projections) {
        saw_excited |= max_abs(p - pauli::projector_excited()) < 1e-12;
        saw_ground |= max_abs(p - pauli::projector_ground()) < 1e-12;
    }
    CHECK(saw_excited);
    CHECK(saw_ground);
}

TEST_CASE("joint spectral projections of the identity") {
    const auto decomposition = joint_spectral_projections({identity(3)});
    REQUIRE(decomposition.size() == 1);
    CHECK(max_abs(decomposition.projections[0] - identity(3)) < 1e-12);
}

TEST_CASE("joint spectral projections of two commuting qubit observables") {
    const ComplexMatrix z1 = kron(pauli::sigma_z(), identity(2));
    const ComplexMatrix z2 = kron(identity(2), pauli::sigma_z());
    const auto decomposition = joint_spectral_projections({z1, z2});
    REQUIRE(decomposition.size() == 4);
    // Brute force: the four diagonal basis projectors.
    for (int k = 0; k < 4; ++k) {
        const ComplexMatrix target = DensityMatrix::basis(4, k).matrix();
        int matches = 0;
        for (const auto& p : decomposition.projections) matches += max_abs(p - target) < 1e-12 ? 1 : 0;
        CHECK(matches == 1);
    }
}

TEST_CASE("joint spectral projections form a resolution of the identity") {
    Rng rng(6);
    for (int i = 0; i < 40; ++i) {
        const int d = 2 + i % 7;
        const auto family = random_commuting_family(d, 3, rng);
        const auto decomposition = joint_spectral_projections(family);
        ComplexMatrix sum = ComplexMatrix::Zero(d, d);
        for (std::size_t j = 0; j < decomposition.size(); ++j) {
            const auto& pj = decomposition.projections[j];
            sum += pj;
            CHECK(max_abs(pj - pj.adjoint()) <= 1e-9);
            for (std::size_t k = 0; k < decomposition.size(); ++k) {
                const ComplexMatrix expected = j == k ? pj : ComplexMatrix::Zero(d, d);
                CHECK(max_abs(pj * decomposition.projections[k] - expected) <= 1e-9);
            }
        }
        CHECK(max_abs(sum - identity(d)) <= 1e-9);
        // Each member is reproduced from the projections and joint eigenvalues.
        for (std::size_t m = 0; m < family.size(); ++m) {
            ComplexMatrix rebuilt = ComplexMatrix::Zero(d, d);
            for (std::size_t k = 0; k < decomposition.size(); ++k) rebuilt += decomposition.eigenvalues[k][m] * decomposition.projections[k];
            CHECK(max_abs(rebuilt - family[m]) <= 1e-9);
        }
    }
}

TEST_CASE("joint spectral projections reject bad families") {
    CHECK_THROWS_AS(joint_spectral_projections({pauli::sigma_x(), pauli::sigma_z()}), ValidationError);
    CHECK_THROWS_AS(joint_spectral_projections({pauli::sigma_minus()}), ValidationError);
    CHECK_THROWS_AS(joint_spectral_projections({}), DimensionError);
}

TEST_CASE("trace distance") {
    Rng rng(7);
    const DensityMatrix rho = random_density(3, rng);
    CHECK(trace_distance(rho, rho) == doctest::Approx(0.0));
    CHECK(trace_distance(DensityMatrix::basis(2, 0), DensityMatrix::basis(2, 1)) == doctest::Approx(1.0));
    CHECK(trace_distance(DensityMatrix::basis(2, 0), DensityMatrix::maximally_mixed(2)) == doctest::Approx(0.5));
    for (int i = 0; i < 20; ++i) {
        const DensityMatrix a = random_density(4, rng);
        const DensityMatrix b = random_density(4, rng);
        const double d = trace_distance(a, b);
        CHECK(d >= 0.0);
        CHECK(d <= 1.0);
        CHECK(d == doctest::Approx(oracle::trace_distance(a.matrix(), b.matrix())).epsilon(1e-12));
    }
}

TEST_CASE("random unitaries are unitary") {
    Rng rng(8);
    for (int d = 1; d <= 8; ++d) CHECK(is_unitary(random_unitary(d, rng), 1e-12));
}
