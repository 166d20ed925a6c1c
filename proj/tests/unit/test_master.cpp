#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "qfilter/master.hpp"
#include "qfilter/random.hpp"

using namespace qfilter;

namespace {

HPModel decay_model(double gamma) {
    return HPModel(identity(2), std::sqrt(gamma) * pauli::sigma_minus(), ComplexMatrix::Zero(2, 2));
}

double min_eigenvalue(const ComplexMatrix& rho) { return hermitian_eigenvalues(rho).minCoeff(); }

}  // namespace

TEST_CASE("time grid") {
    const TimeGrid g = TimeGrid::over(5.0, 1e-3);
    CHECK(g.steps == 5000);
    CHECK(g.end() == doctest::Approx(5.0));
    CHECK_THROWS_AS((TimeGrid{0.0, 0.0, 10}.validate()), ValidationError);
    CHECK_THROWS_AS((TimeGrid{0.0, 1e-3, 0}.validate()), ValidationError);
}

TEST_CASE("unitary evolution matches the matrix exponential") {
    Rng rng(1);
    const ComplexMatrix h = random_hermitian(3, rng);
    const HPModel m(identity(3), ComplexMatrix::Zero(3, 3), h);
    const DensityMatrix rho0 = random_density(3, rng);
    const TimeGrid grid = TimeGrid::over(2.0, 1e-3);
    const auto traj = integrate_master(m, CoherentInput::vacuum(), rho0, grid);
    REQUIRE(traj.states.size() == static_cast<std::size_t>(grid.steps + 1));
    for (int k = 0; k <= grid.steps; k += 250) {
        const ComplexMatrix expected = oracle::von_neumann(rho0.matrix(), h, grid.time(k));
        CHECK(max_abs(traj.states[k].matrix() - expected) <= 1e-8);
    }
}

TEST_CASE("spontaneous decay") {
    const double gamma = 1.0;
    const TimeGrid grid = TimeGrid::over(5.0, 1e-3);
    const auto traj = integrate_master(decay_model(gamma), CoherentInput::vacuum(), DensityMatrix::basis(2, 0), grid);
    double worst = 0.0;
    for (int k = 0; k <= grid.steps; ++k) {
        const double pe = expectation(traj.states[k], pauli::projector_excited()).real();
        worst = std::max(worst, std::abs(pe - oracle::decay_population(gamma, grid.time(k))));
    }
    CHECK(worst <= 1e-6);
}

TEST_CASE("driven decay converges to the steady state") {
    const double gamma = 1.0;
    const HPModel m = decay_model(gamma);
    const complex beta(0.5, 0.0);
    const DensityMatrix ss = steady_state(m, beta);
    const auto traj = integrate_master(m, CoherentInput::constant(beta), DensityMatrix::basis(2, 0),
                                       TimeGrid::over(20.0 / gamma, 1e-3));
    CHECK(max_abs(traj.states.back().matrix() - ss.matrix()) <= 1e-6);
    CHECK(max_abs(adjoint_generator(m, beta, ss.matrix())) <= 1e-10);
    // An interior point: neither population vanishes.
    const double pe = expectation(ss, pauli::projector_excited()).real();
    CHECK(pe > 0.01);
    CHECK(pe < 0.5);
}

TEST_CASE("steady state of pure decay is the ground state") {
    const DensityMatrix ss = steady_state(decay_model(2.0), complex(0.0, 0.0));
    CHECK(max_abs(ss.matrix() - pauli::projector_ground()) <= 1e-10);
}

TEST_CASE("degenerate stationary states are reported") {
    const HPModel m(identity(2), ComplexMatrix::Zero(2, 2), pauli::sigma_z());
    CHECK_THROWS_AS(steady_state(m, complex(0.0, 0.0)), NumericalError);
}

TEST_CASE("vectorized generator acts like the adjoint generator") {
    Rng rng(2);
    const HPModel m(random_unitary(3, rng), random_complex_matrix(3, rng), random_hermitian(3, rng));
    const complex beta = random_complex(rng);
    const ComplexMatrix rho = random_density(3, rng).matrix();
    const ComplexMatrix g = vectorized_generator(m, beta);
    const ComplexVector vec = Eigen::Map<const ComplexVector>(rho.data(), rho.size());
    const ComplexVector out = g * vec;
    const ComplexMatrix reshaped = Eigen::Map<const ComplexMatrix>(out.data(), 3, 3);
    CHECK(max_abs(reshaped - adjoint_generator(m, beta, rho)) <= 1e-12);
}

TEST_CASE("trace and positivity along trajectories") {
    Rng rng(3);
    for (int i = 0; i < 5; ++i) {
        const int d = 2 + i % 3;
        const HPModel m(random_unitary(d, rng), 0.7 * random_complex_matrix(d, rng), random_hermitian(d, rng));
        const auto beta = CoherentInput::sinusoid(random_complex(rng), 1.3, random_complex(rng, 0.3));
        const TimeGrid grid = TimeGrid::over(1.0, 1e-3);
        const auto traj = integrate_master(m, beta, random_density(d, rng), grid);
        for (const auto& s : traj.states) {
            CHECK(std::abs(s.matrix().trace() - 1.0) <= 1e-9);
            CHECK(min_eigenvalue(s.matrix()) >= -1e-7);
        }
    }
}

TEST_CASE("RK4 error falls by about sixteen when the step halves") {
    const HPModel m(identity(2), 0.8 * pauli::sigma_minus(), pauli::sigma_x());
    const auto beta = CoherentInput::sinusoid({0.6, 0.2}, 2.0, {0.1, 0.0});
    const DensityMatrix rho0 = DensityMatrix::basis(2, 0);
    const double horizon = 2.0;
    const double dt = 0.1;
    auto final_state = [&](double step) {
        return integrate_master(m, beta, rho0, TimeGrid::over(horizon, step)).states.back().matrix();
    };
    const ComplexMatrix reference = final_state(dt / 16.0);
    const double coarse = max_abs(final_state(dt) - reference);
    const double fine = max_abs(final_state(dt / 2.0) - reference);
    const double ratio = coarse / fine;
    INFO("ratio = " << ratio);
    CHECK(ratio >= 8.0);
    CHECK(ratio <= 32.0);
}

TEST_CASE("oversized steps are rejected") {
    const HPModel m(identity(2), 30.0 * pauli::sigma_minus(), ComplexMatrix::Zero(2, 2));
    CHECK_THROWS_AS(integrate_master(m, CoherentInput::vacuum(), DensityMatrix::basis(2, 0), TimeGrid::over(1.0, 0.1)),
                    NumericalError);
}
