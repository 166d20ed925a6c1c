#pragma once

// Deterministic coherent-state master equation  d rho/dt = L^beta(t)' rho.

#include <vector>

#include "qfilter/model.hpp"
#include "qfilter/operator.hpp"

namespace qfilter {

/// Uniform grid t_k = t0 + k dt, k = 0..steps.
struct TimeGrid {
    double t0 = 0.0;
    double dt = 1e-3;
    int steps = 1;

    /// Grid covering [t0, t0 + horizon] with round(horizon / dt) steps.
    static TimeGrid over(double horizon, double dt, double t0 = 0.0);

    double time(int k) const { return t0 + dt * static_cast<double>(k); }
    double end() const { return time(steps); }
    /// Throws ValidationError unless dt > 0 and steps >= 1.
    void validate() const;
};

struct MasterTrajectory {
    TimeGrid grid;
    std::vector<DensityMatrix> states;  ///< steps + 1 entries
};

/// Positivity tolerance for integrated states, looser than the default to
/// absorb integrator error.
inline constexpr double kIntegratorPositivityTol = 1e-7;

/// One classical RK4 step with beta sampled at t, t + dt/2, t + dt.
ComplexMatrix master_rk4_step(const HPModel& m, const CoherentInput& beta, const ComplexMatrix& rho,
                              double t, double dt);

/// Throws NumericalError if the trace drifts by more than 1e-6 (step too
/// large) or the state stops being a valid density matrix.
MasterTrajectory integrate_master(const HPModel& m, const CoherentInput& beta, const DensityMatrix& rho0,
                                  const TimeGrid& grid);

/// Column-stacked superoperator: vec(L' rho) = G vec(rho), with
/// vec(A rho B) = (B^T ⊗ A) vec(rho).
ComplexMatrix vectorized_generator(const HPModel& m, complex beta);

/// The unique stationary state of the time-independent generator. Throws
/// NumericalError when the null space is not one-dimensional (more than one
/// singular value below 1e-8 relative to the largest).
DensityMatrix steady_state(const HPModel& m, complex beta);

}  // namespace qfilter
