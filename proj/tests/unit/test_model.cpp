#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "qfilter/identities.hpp"
#include "qfilter/model.hpp"
#include "qfilter/random.hpp"

using namespace qfilter;

namespace {

HPModel decay_model(double gamma) {
    return HPModel(identity(2), std::sqrt(gamma) * pauli::sigma_minus(), ComplexMatrix::Zero(2, 2));
}

ComplexMatrix lindblad_form(const ComplexMatrix& l, const ComplexMatrix& h, const ComplexMatrix& x) {
    const ComplexMatrix ld = l.adjoint();
    return 0.5 * ld * (x * l - l * x) + 0.5 * (ld * x - x * ld) * l - kI * (x * h - h * x);
}

}  // namespace

TEST_CASE("model validation") {
    CHECK_THROWS_AS(HPModel(2.0 * identity(2), ComplexMatrix::Zero(2, 2), ComplexMatrix::Zero(2, 2)),
                    ValidationError);
    CHECK_THROWS_AS(HPModel(identity(2), ComplexMatrix::Zero(2, 2), pauli::sigma_minus()), ValidationError);
    CHECK_THROWS_AS(HPModel(identity(2), ComplexMatrix::Zero(3, 3), ComplexMatrix::Zero(2, 2)), DimensionError);
    try {
        HPModel(2.0 * identity(2), ComplexMatrix::Zero(2, 2), ComplexMatrix::Zero(2, 2));
    } catch (const ValidationError& e) {
        CHECK(e.key() == "S");
    }
}

TEST_CASE("measurement kind names") {
    CHECK(parse_measurement_kind("quadrature") == MeasurementKind::quadrature);
    CHECK(parse_measurement_kind("counting") == MeasurementKind::counting);
    CHECK(to_string(MeasurementKind::counting) == "counting");
    CHECK_THROWS_AS(parse_measurement_kind("heterodyne"), ValidationError);
}

TEST_CASE("coherent input kinds") {
    CHECK(CoherentInput::vacuum()(3.0) == complex(0.0, 0.0));
    CHECK(CoherentInput::constant({0.5, -0.25})(1.0) == complex(0.5, -0.25));
    const auto sin = CoherentInput::sinusoid({1.0, 0.0}, 2.0, {0.5, 0.0});
    CHECK(std::abs(sin(0.3) - (std::exp(kI * 0.6) + 0.5)) < 1e-15);
    const auto samples = CoherentInput::samples(0.0, 0.5, {{1.0, 0.0}, {2.0, 0.0}, {3.0, 0.0}});
    CHECK(samples(0.0).real() == 1.0);
    CHECK(samples(0.49).real() == 1.0);
    CHECK(samples(0.5).real() == 2.0);
    CHECK(samples(1.2).real() == 3.0);
    CHECK(samples(10.0).real() == 3.0);
    CHECK(samples(-1.0).real() == 1.0);
}

TEST_CASE("intensity integrals") {
    CHECK(CoherentInput::constant({0.0, 2.0}).intensity_integral(0.0, 3.0) == doctest::Approx(12.0));
    const auto samples = CoherentInput::samples(0.0, 0.5, {{1.0, 0.0}, {2.0, 0.0}});
    CHECK(samples.intensity_integral(0.0, 1.0) == doctest::Approx(0.5 * 1.0 + 0.5 * 4.0));
    // |a e^{iwt} + c|^2 = a^2 + c^2 + 2ac cos(wt), integrated in closed form.
    const double a = 1.0;
    const double c = 0.5;
    const double w = 3.0;
    const auto sin = CoherentInput::sinusoid({a, 0.0}, w, {c, 0.0});
    const double t = 2.0;
    CHECK(sin.intensity_integral(0.0, t) == doctest::Approx((a * a + c * c) * t + 2.0 * a * c * std::sin(w * t) / w));
}

TEST_CASE("modulated coupling") {
    const HPModel decay = decay_model(1.0);
    CHECK(max_abs(modulated_coupling(decay, CoherentInput::vacuum(), 0.0) - decay.L()) == 0.0);
    const HPModel trivial(identity(2), ComplexMatrix::Zero(2, 2), ComplexMatrix::Zero(2, 2));
    CHECK(max_abs(modulated_coupling(trivial, CoherentInput::constant(1.0), 0.0) - identity(2)) == 0.0);
    const HPModel m(pauli::sigma_z(), pauli::sigma_minus(), ComplexMatrix::Zero(2, 2));
    CHECK(max_abs(modulated_coupling(m, CoherentInput::constant(kI), 0.0) -
                  (kI * pauli::sigma_z() + pauli::sigma_minus())) == 0.0);
}

TEST_CASE("modulated Hamiltonian") {
    Rng rng(1);
    const HPModel m = random_model(3, rng);
    CHECK(max_abs(modulated_hamiltonian(m, complex(0.0, 0.0)) - m.H()) == 0.0);
    const HPModel no_coupling(random_unitary(3, rng), ComplexMatrix::Zero(3, 3), m.H());
    CHECK(max_abs(modulated_hamiltonian(no_coupling, complex(0.3, 0.7)) - m.H()) == 0.0);

    // With S = I the correction is (1/2i)(beta L† - beta* L).
    const HPModel s_identity(identity(3), m.L(), m.H());
    const complex beta(0.4, -0.9);
    const ComplexMatrix expected = m.H() + (beta * m.L().adjoint() - std::conj(beta) * m.L()) / (2.0 * kI);
    CHECK(max_abs(modulated_hamiltonian(s_identity, beta) - expected) <= 1e-15);

    for (int i = 0; i < 20; ++i) {
        const HPModel r = random_model(2 + i % 3, rng);
        CHECK(is_hermitian(modulated_hamiltonian(r, random_complex(rng)), 1e-12));
    }
}

TEST_CASE("Evans-Hudson maps") {
    Rng rng(2);
    const HPModel m = random_model(3, rng);
    const HPModel s_identity(identity(3), m.L(), m.H());
    const ComplexMatrix x = random_complex_matrix(3, rng);
    CHECK(max_abs(evans_hudson(s_identity, 1, 1, x)) == 0.0);
    CHECK(max_abs(evans_hudson(m, 0, 0, identity(3))) <= 1e-14);

    const double gamma = 0.7;
    const ComplexMatrix l00 = evans_hudson(decay_model(gamma), 0, 0, pauli::projector_excited());
    CHECK(max_abs(l00 + gamma * pauli::projector_excited()) <= 1e-15);

    CHECK_THROWS_AS(evans_hudson(m, 2, 0, x), ValidationError);
    CHECK_THROWS_AS(evans_hudson(m, 0, -1, x), ValidationError);
}

TEST_CASE("Heisenberg generator") {
    Rng rng(3);
    const HPModel m = random_model(3, rng);
    CHECK(max_abs(heisenberg_generator(m, random_complex(rng), identity(3))) <= 1e-13);
    const ComplexMatrix x = random_hermitian(3, rng);
    CHECK(max_abs(heisenberg_generator(m, complex(0.0, 0.0), x) - evans_hudson(m, 0, 0, x)) == 0.0);
}

TEST_CASE("generator is of Lindblad form with the modulated operators") {
    Rng rng(4);
    for (int i = 0; i < 100; ++i) {
        const int d = 2 + i % 3;
        const HPModel m = random_model(d, rng);
        const complex beta = random_complex(rng);
        const ComplexMatrix x = random_complex_matrix(d, rng);
        const auto ops = modulated_operators(m, beta);
        const ComplexMatrix expected = lindblad_form(ops.coupling, ops.hamiltonian, x);
        CHECK(max_abs(heisenberg_generator(m, beta, x) - expected) <= 1e-10);
    }
}

TEST_CASE("adjoint generator examples") {
    const HPModel decay = decay_model(1.3);
    CHECK(max_abs(adjoint_generator(decay, complex(0.0, 0.0), pauli::projector_ground())) <= 1e-15);
    Rng rng(5);
    const HPModel idle(random_unitary(3, rng), ComplexMatrix::Zero(3, 3), ComplexMatrix::Zero(3, 3));
    CHECK(max_abs(adjoint_generator(idle, complex(0.0, 0.0), random_density(3, rng).matrix())) == 0.0);
}

TEST_CASE("adjoint generator duality and trace preservation") {
    Rng rng(6);
    for (int i = 0; i < 100; ++i) {
        const int d = 2 + i % 3;
        const HPModel m = random_model(d, rng);
        const complex beta = random_complex(rng);
        const ComplexMatrix rho = random_density(d, rng).matrix();
        const ComplexMatrix x = random_complex_matrix(d, rng);
        const ComplexMatrix lrho = adjoint_generator(m, beta, rho);
        CHECK(std::abs(lrho.trace()) <= 1e-12);
        CHECK(is_hermitian(lrho, 1e-12));
        CHECK(std::abs((rho * heisenberg_generator(m, beta, x)).trace() - (lrho * x).trace()) <= 1e-10);
    }
}

TEST_CASE("vacuum reduction of the adjoint generator") {
    const double gamma = 0.8;
    const HPModel m = decay_model(gamma);
    Rng rng(7);
    const ComplexMatrix rho = random_density(2, rng).matrix();
    const ComplexMatrix c = std::sqrt(gamma) * oracle::sigma_minus();
    const ComplexMatrix expected = c * rho * c.adjoint() - 0.5 * (c.adjoint() * c * rho + rho * c.adjoint() * c);
    CHECK(max_abs(adjoint_generator(m, CoherentInput::vacuum(), 0.0, rho) - expected) <= 1e-15);
}
