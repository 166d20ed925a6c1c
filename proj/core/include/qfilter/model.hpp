#pragma once

// Hudson-Parthasarathy system model (S, L, H) driven by a coherent input
// field with amplitude beta(t), and the generators it induces.
//
// Units: beta and L carry time^(-1/2), H carries time^(-1).

#include <string_view>
#include <variant>
#include <vector>

#include "qfilter/operator.hpp"

namespace qfilter {

enum class MeasurementKind { quadrature, counting };

std::string_view to_string(MeasurementKind kind);
/// Accepts "quadrature" or "counting"; throws ValidationError otherwise.
MeasurementKind parse_measurement_kind(std::string_view text);

/// The system triple. S unitary and H Hermitian within 1e-9.
class HPModel {
public:
    static constexpr double kTol = 1e-9;

    HPModel(ComplexMatrix scattering, ComplexMatrix coupling, ComplexMatrix hamiltonian);

    int dim() const noexcept { return static_cast<int>(s_.rows()); }
    const ComplexMatrix& S() const noexcept { return s_; }
    const ComplexMatrix& L() const noexcept { return l_; }
    const ComplexMatrix& H() const noexcept { return h_; }

private:
    ComplexMatrix s_;
    ComplexMatrix l_;
    ComplexMatrix h_;
};

/// Coherent-state test function beta(t).
class CoherentInput {
public:
    struct Constant {
        complex value;
    };
    /// Piecewise constant: value[k] on [t0 + k dt, t0 + (k+1) dt); held at
    /// the end values outside the sampled range.
    struct Samples {
        double t0 = 0.0;
        double dt = 1.0;
        std::vector<complex> values;
    };
    /// amplitude * exp(i omega t) + offset
    struct Sinusoid {
        complex amplitude;
        double omega = 0.0;
        complex offset;
    };
    using Kind = std::variant<Constant, Samples, Sinusoid>;

    CoherentInput() : kind_(Constant{complex{0.0, 0.0}}) {}
    explicit CoherentInput(Kind kind);

    static CoherentInput vacuum() { return CoherentInput(); }
    static CoherentInput constant(complex value) { return CoherentInput(Constant{value}); }
    static CoherentInput sinusoid(complex amplitude, double omega, complex offset) {
        return CoherentInput(Sinusoid{amplitude, omega, offset});
    }
    static CoherentInput samples(double t0, double dt, std::vector<complex> values) {
        return CoherentInput(Samples{t0, dt, std::move(values)});
    }

    complex operator()(double t) const;
    const Kind& kind() const noexcept { return kind_; }

    /// Integral of |beta(t)|^2 over [t0, t1]. Exact for constant and sampled
    /// inputs, closed form for sinusoids.
    double intensity_integral(double t0, double t1) const;

private:
    Kind kind_;
};

/// L^beta and the S-corrected H^beta for one value of beta.
struct ModulatedOperators {
    ComplexMatrix coupling;     ///< S beta + L
    ComplexMatrix hamiltonian;  ///< H + (1/2i)(beta L†S - beta* S†L)
};

ModulatedOperators modulated_operators(const HPModel& m, complex beta);

ComplexMatrix modulated_coupling(const HPModel& m, complex beta);
ComplexMatrix modulated_coupling(const HPModel& m, const CoherentInput& beta, double t);
ComplexMatrix modulated_hamiltonian(const HPModel& m, complex beta);
ComplexMatrix modulated_hamiltonian(const HPModel& m, const CoherentInput& beta, double t);

/// Evans-Hudson map L_{mu nu} applied to X; mu, nu in {0, 1}.
///   L_11 X = S†XS - X
///   L_10 X = S†[X, L]
///   L_01 X = [L†, X] S
///   L_00 X = ½L†[X, L] + ½[L†, X]L - i[X, H]
/// Throws ValidationError for any other index.
ComplexMatrix evans_hudson(const HPModel& m, int mu, int nu, const ComplexMatrix& x);

/// Lindblad generator ½L†[X,L] + ½[L†,X]L - i[X,H] (Heisenberg picture).
ComplexMatrix lindblad_generator(const ComplexMatrix& coupling, const ComplexMatrix& hamiltonian,
                                 const ComplexMatrix& x);

/// L^beta X = L_00 X + beta* L_10 X + beta L_01 X + |beta|^2 L_11 X.
ComplexMatrix heisenberg_generator(const HPModel& m, complex beta, const ComplexMatrix& x);
ComplexMatrix heisenberg_generator(const HPModel& m, const CoherentInput& beta, double t,
                                   const ComplexMatrix& x);

/// Schrödinger-picture dual: -i[H^beta, rho] + L^beta rho L^beta† - ½{L^beta† L^beta, rho}.
ComplexMatrix adjoint_generator(const HPModel& m, complex beta, const ComplexMatrix& rho);
ComplexMatrix adjoint_generator(const HPModel& m, const CoherentInput& beta, double t,
                                const ComplexMatrix& rho);
/// Same, from precomputed modulated operators.
ComplexMatrix adjoint_generator(const ModulatedOperators& ops, const ComplexMatrix& rho);

}  // namespace qfilter
