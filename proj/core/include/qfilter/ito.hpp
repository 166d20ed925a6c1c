#pragma once

// Quantum Itô calculus with concrete matrix coefficients.
//
// An IncrementPolynomial is  A dt + B dB + C dB† + D dΛ  with system-space
// matrix coefficients. Products follow the Hudson-Parthasarathy table
//
//          | dB   dΛ   dB†  dt
//     -----+--------------------
//      dB  | 0    dB   dt   0
//      dΛ  | 0    dΛ   dB†  0
//      dB† | 0    0    0    0
//      dt  | 0    0    0    0
//
// (row = left factor). Identities are checked numerically, not by rewriting.

#include <utility>

#include "qfilter/model.hpp"
#include "qfilter/operator.hpp"

namespace qfilter {

enum class Increment { dt, dB, dB_dag, dLambda };

struct IncrementPolynomial {
    ComplexMatrix dt;
    ComplexMatrix dB;
    ComplexMatrix dB_dag;
    ComplexMatrix dLambda;

    static IncrementPolynomial zero(int dim);
    /// coeff times a single basis increment.
    static IncrementPolynomial basis(Increment which, const ComplexMatrix& coeff);

    int dim() const { return dim_of(dt); }
    ComplexMatrix& operator[](Increment which);
    const ComplexMatrix& operator[](Increment which) const;

    /// Formal adjoint: coefficients daggered, dB and dB† exchanged.
    IncrementPolynomial adjoint() const;

    IncrementPolynomial& operator+=(const IncrementPolynomial& other);
    double max_abs() const;
};

IncrementPolynomial operator+(IncrementPolynomial a, const IncrementPolynomial& b);
IncrementPolynomial operator-(IncrementPolynomial a, const IncrementPolynomial& b);
/// Left multiplication of every coefficient: A (sum c_e de) = sum (A c_e) de.
IncrementPolynomial operator*(const ComplexMatrix& a, const IncrementPolynomial& p);
IncrementPolynomial operator*(const IncrementPolynomial& p, const ComplexMatrix& a);
IncrementPolynomial operator*(complex s, const IncrementPolynomial& p);

/// Product of two increments through the Itô table. P's coefficient
/// left-multiplies Q's. Throws DimensionError on mismatch.
IncrementPolynomial ito_product(const IncrementPolynomial& p, const IncrementPolynomial& q);

/// dt-rate of <Psi(beta)| P |Psi(beta)>-type averages:
/// coeff_dt + beta coeff_dB + beta* coeff_dB† + |beta|^2 coeff_dΛ.
ComplexMatrix coherent_expectation(const IncrementPolynomial& p, complex beta);

/// dj_t(X) coefficients (L_00 X, L_01 X, L_10 X, L_11 X) on (dt, dB, dB†, dΛ).
IncrementPolynomial langevin_increment(const HPModel& m, const ComplexMatrix& x);

/// (dB_out, dΛ_out) = ((L, S, 0, 0), (L†L, S†L, L†S, I)) on (dt, dB, dB†, dΛ).
std::pair<IncrementPolynomial, IncrementPolynomial> output_increments(const HPModel& m);

/// ‖coherent_expectation(langevin_increment(m, X), beta) - L^beta X‖_max.
double verify_generator(const HPModel& m, complex beta, const ComplexMatrix& x);

/// Reference-measure coefficients of dF = R dY_in F + K dt F.
///
/// quadrature: tilde_coupling = L + (S - I) beta,
///             tilde_drift    = -L†S beta - ½L†L - iH - tilde_coupling beta,
///             record_coefficient = tilde_coupling;
/// counting:   record_coefficient = tilde_coupling / beta,
///             tilde_drift    = -(½L†L + iH + L†S beta).
struct GirsanovCoefficients {
    ComplexMatrix tilde_coupling;
    ComplexMatrix tilde_drift;
    ComplexMatrix record_coefficient;
};

inline constexpr double kDefaultBetaMin = 1e-3;

/// Throws NumericalError for counting when |beta| < beta_min.
GirsanovCoefficients girsanov_coefficients(const HPModel& m, complex beta, MeasurementKind kind,
                                           double beta_min = kDefaultBetaMin);
GirsanovCoefficients girsanov_coefficients(const HPModel& m, const CoherentInput& beta, double t,
                                           MeasurementKind kind, double beta_min = kDefaultBetaMin);

/// Heisenberg-picture Zakai coefficients: d sigma(X) = sigma(gain) dY + sigma(drift) dt.
struct ZakaiCoefficients {
    ComplexMatrix gain;
    ComplexMatrix drift;
};

/// Expands d(F†XF) = dF† X + X dF + dF† X dF with the Itô table from the
/// Girsanov coefficients, and reads off the dY_in and dt coefficients. For
/// quadrature the dB and dB† coefficients must agree; their mismatch is
/// returned as the second member (0 for counting).
std::pair<ZakaiCoefficients, double> zakai_from_ito(const HPModel& m, complex beta,
                                                    MeasurementKind kind, const ComplexMatrix& x);

/// Closed forms:
///   quadrature gain  X L~ + L~† X,  drift L~† X L~ + X K~ + K~† X;
///   counting   gain  (L~† X L~ + beta* X L~ + beta L~† X) / |beta|^2,
///              drift X K~ + K~† X.
ZakaiCoefficients zakai_closed_form(const HPModel& m, complex beta, MeasurementKind kind,
                                    const ComplexMatrix& x);

/// The reference-measure mean rate of dY: beta + beta* (quadrature) or
/// |beta|^2 (counting). drift + shift * gain equals L^beta X.
double reference_rate(complex beta, MeasurementKind kind);

/// Non-demolition at the representation level: system operators act on the
/// first tensor factor, field increments on the second, so X⊗1 commutes with
/// 1⊗dE for every basis increment. Returns the largest commutator entry over
/// a two-level matrix representation of {dt, dB, dB†, dΛ}.
double nondemolition_residual(const ComplexMatrix& x);

}  // namespace qfilter
