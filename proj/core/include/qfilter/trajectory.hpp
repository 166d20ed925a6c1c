#pragma once

// Coherent-state quantum filters in density-matrix (stochastic master
// equation) form.
//
// Quadrature (homodyne) filter, J = L^beta(t), m = tr[(J + J†) rho]:
//     rho += L' rho dt + (J rho + rho J† - m rho)(dY - m dt)
//
// Counting filter, r = tr[J rho J†]:
//     dY = 1:  rho -> J rho J† / r, then the no-click drift for dt
//     dY = 0:  rho += (L' rho - J rho J† + r rho) dt
//
// Every step ends with a Hermitian projection and trace renormalization.
// beta is sampled at the left end of each step.

#include <cstdint>
#include <optional>
#include <vector>

#include "qfilter/ito.hpp"
#include "qfilter/master.hpp"
#include "qfilter/model.hpp"

namespace qfilter {

/// Observed increments dY_k on a grid. Counting increments are 0 or 1.
struct MeasurementRecord {
    MeasurementKind kind = MeasurementKind::quadrature;
    TimeGrid grid;
    std::vector<double> increments;

    /// Throws ValidationError on length mismatch or non-binary counts.
    void validate() const;
};

/// Conditional state. `rho` is the normalized filter pi_t; the unnormalized
/// Zakai state is sigma_t = exp(log_norm) * rho.
struct FilterState {
    ComplexMatrix rho;
    double log_norm = 0.0;
    double t = 0.0;

    static FilterState from(const DensityMatrix& rho0, double t0 = 0.0) { return {rho0.matrix(), 0.0, t0}; }
};

struct InnovationsPath {
    TimeGrid grid;
    std::vector<double> increments;

    /// I(t_k), k = 0..steps, starting from I(0) = 0.
    std::vector<double> cumulative() const;
};

/// Smallest admissible jump probability normalizer tr[J rho J†].
inline constexpr double kRateFloor = 1e-12;
/// Bernoulli validity bound for simulated counting: r dt <= 0.1.
inline constexpr double kMaxJumpProbability = 0.1;

FilterState quad_filter_step(const FilterState& s, double dy, const HPModel& m, const CoherentInput& beta,
                             double dt);

/// `dy` must be 0 or 1. Throws NumericalError if a click arrives while the
/// jump rate is below kRateFloor.
FilterState count_filter_step(const FilterState& s, int dy, const HPModel& m, const CoherentInput& beta,
                              double dt);

/// Dispatches on `kind`; counting increments must be exactly 0 or 1.
FilterState filter_step(MeasurementKind kind, const FilterState& s, double dy, const HPModel& m,
                        const CoherentInput& beta, double dt);

struct ZakaiOptions {
    double beta_min = kDefaultBetaMin;
};

/// Linear increment d sigma of the Zakai equation applied to `rho`
/// (Schrödinger picture), for an observed dy:
///   quadrature: L' rho dt + (L~ rho + rho L~†)(dy - (beta + beta*) dt)
///   counting:   L' rho dt + ((L~ rho L~† + beta* L~ rho + beta rho L~†)/|beta|^2)(dy - |beta|^2 dt)
ComplexMatrix zakai_increment(const FilterState& s, double dy, const HPModel& m, const CoherentInput& beta,
                              double dt, MeasurementKind kind, const ZakaiOptions& options = {});

/// One step of the unnormalized filter, carried as (normalized rho,
/// log sigma(I)). The Zakai increments d sigma and d sigma(I) are combined
/// through the Itô quotient rule for sigma / sigma(I); counting clicks are
/// applied exactly. Throws NumericalError when |beta| < beta_min (counting),
/// on trace underflow, or on a click at zero rate.
FilterState zakai_step(const FilterState& s, double dy, const HPModel& m, const CoherentInput& beta, double dt,
                       MeasurementKind kind, const ZakaiOptions& options = {});

/// Gain multiplying the innovation in the Heisenberg filter equation:
///   quadrature: pi(X J + J† X) - pi(X) pi(J + J†)
///   counting:   pi(J† X J) / pi(J† J) - pi(X)
complex innovation_gain(MeasurementKind kind, const ComplexMatrix& rho, const HPModel& m, complex beta,
                        const ComplexMatrix& x);

/// Predictable rate of dY under the filter: pi(J + J†) or pi(J† J).
double predicted_rate(MeasurementKind kind, const ComplexMatrix& rho, const HPModel& m, complex beta);

struct SimulatedTrajectory {
    MeasurementRecord record;
    std::vector<FilterState> states;  ///< steps + 1 entries
    /// Quadrature only: the Gaussian innovation draws dI_k.
    std::vector<double> noise;
};

/// Generates a record from the filter's own predictive law (innovations
/// representation) and co-evolves the filter. Deterministic in
/// (seed, grid, model). Throws NumericalError if a counting step has
/// r dt > 0.1.
SimulatedTrajectory simulate_record(const HPModel& m, const CoherentInput& beta, const DensityMatrix& rho0,
                                    MeasurementKind kind, const TimeGrid& grid, std::uint64_t seed);

/// Replays the filter against a stored record. Throws ValidationError if
/// `expected_kind` is given and differs from the record's kind.
std::vector<FilterState> filter_record(const HPModel& m, const CoherentInput& beta, const DensityMatrix& rho0,
                                       const MeasurementRecord& record,
                                       std::optional<MeasurementKind> expected_kind = std::nullopt);

/// Replays the Zakai filter against a stored record.
std::vector<FilterState> zakai_record(const HPModel& m, const CoherentInput& beta, const DensityMatrix& rho0,
                                      const MeasurementRecord& record, const ZakaiOptions& options = {});

/// dI_k = dY_k - predicted_rate(rho_k) dt. `states` must hold steps + 1
/// entries aligned with the record.
InnovationsPath innovations(const MeasurementRecord& record, const std::vector<FilterState>& states,
                            const HPModel& m, const CoherentInput& beta);

}  // namespace qfilter
