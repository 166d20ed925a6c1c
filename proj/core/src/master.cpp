#include "qfilter/master.hpp"

#include <cmath>
#include <string>

namespace qfilter {

TimeGrid TimeGrid::over(double horizon, double dt, double t0) {
    if (!(dt > 0.0)) throw ValidationError("time step must be positive", "dt");
    const double steps = std::round(horizon / dt);
    if (!(steps >= 1.0)) throw ValidationError("time horizon must cover at least one step", "T");
    return {t0, dt, static_cast<int>(steps)};
}

void TimeGrid::validate() const {
    if (!(dt > 0.0) || !std::isfinite(dt)) throw ValidationError("time step must be positive", "dt");
    if (steps < 1) throw ValidationError("grid needs at least one step", "steps");
}

ComplexMatrix master_rk4_step(const HPModel& m, const CoherentInput& beta, const ComplexMatrix& rho,
                              double t, double dt) {
    const auto ops_start = modulated_operators(m, beta(t));
    const auto ops_mid = modulated_operators(m, beta(t + 0.5 * dt));
    const auto ops_end = modulated_operators(m, beta(t + dt));
    const ComplexMatrix k1 = adjoint_generator(ops_start, rho);
    const ComplexMatrix k2 = adjoint_generator(ops_mid, rho + 0.5 * dt * k1);
    const ComplexMatrix k3 = adjoint_generator(ops_mid, rho + 0.5 * dt * k2);
    const ComplexMatrix k4 = adjoint_generator(ops_end, rho + dt * k3);
    return rho + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

MasterTrajectory integrate_master(const HPModel& m, const CoherentInput& beta, const DensityMatrix& rho0,
                                  const TimeGrid& grid) {
    grid.validate();
    require_same_dim(m.S(), rho0.matrix());
    MasterTrajectory out{grid, {}};
    out.states.reserve(static_cast<std::size_t>(grid.steps) + 1);
    out.states.push_back(rho0);

    ComplexMatrix rho = rho0.matrix();
    for (int k = 0; k < grid.steps; ++k) {
        rho = master_rk4_step(m, beta, rho, grid.time(k), grid.dt);
        const double drift = std::abs(rho.trace() - 1.0);
        if (!is_finite(rho) || drift > 1e-6) {
            throw NumericalError("master equation trace drifted by " + std::to_string(drift) + " at t = " +
                                 std::to_string(grid.time(k + 1)) + "; reduce dt");
        }
        // Strip rounding-level anti-Hermitian and trace noise so the state
        // stays inside the DensityMatrix tolerances over long runs.
        rho = hermitian_part(rho);
        rho /= rho.trace().real();
        try {
            out.states.emplace_back(rho, kIntegratorPositivityTol);
        } catch (const ValidationError& e) {
            throw NumericalError(std::string("master equation left the state space: ") + e.what());
        }
    }
    return out;
}

ComplexMatrix vectorized_generator(const HPModel& m, complex beta) {
    const auto ops = modulated_operators(m, beta);
    const int d = m.dim();
    const ComplexMatrix id = identity(d);
    const ComplexMatrix& j = ops.coupling;
    const ComplexMatrix& h = ops.hamiltonian;
    const ComplexMatrix jdj = j.adjoint() * j;
    // -i(H rho - rho H) + J rho J† - ½(J†J rho + rho J†J)
    return -kI * (kron(id, h) - kron(h.transpose(), id)) + kron(j.conjugate(), j) -
           0.5 * (kron(id, jdj) + kron(jdj.transpose(), id));
}

DensityMatrix steady_state(const HPModel& m, complex beta) {
    const int d = m.dim();
    const ComplexMatrix g = vectorized_generator(m, beta);
    Eigen::JacobiSVD<ComplexMatrix> svd(g, Eigen::ComputeFullV);
    const Eigen::VectorXd& sv = svd.singularValues();  // descending
    const double scale = std::max(1.0, sv(0));
    const Eigen::Index n = sv.size();
    if (n >= 2 && sv(n - 2) <= 1e-8 * scale) {
        throw NumericalError("stationary state is not unique (degenerate null space)");
    }
    const ComplexVector null = svd.matrixV().col(n - 1);
    ComplexMatrix rho(d, d);
    for (int col = 0; col < d; ++col) rho.col(col) = null.segment(col * d, d);
    const complex tr = rho.trace();
    if (std::abs(tr) < 1e-12) throw NumericalError("stationary vector has zero trace");
    rho /= tr;
    return DensityMatrix(hermitian_part(rho), kIntegratorPositivityTol);
}

}  // namespace qfilter
