#include "qfilter/trajectory.hpp"

#include "qfilter/random.hpp"

#include <cmath>
#include <random>
#include <string>

namespace qfilter {

void MeasurementRecord::validate() const {
    grid.validate();
    if (increments.size() != static_cast<std::size_t>(grid.steps)) {
        throw ValidationError("record has " + std::to_string(increments.size()) + " increments for " +
                              std::to_string(grid.steps) + " steps", "increments");
    }
    for (std::size_t k = 0; k < increments.size(); ++k) {
        const double dy = increments[k];
        if (!std::isfinite(dy)) throw ValidationError("non-finite increment at " + std::to_string(k), "increments");
        if (kind == MeasurementKind::counting && dy != 0.0 && dy != 1.0) {
            throw ValidationError("counting increment at " + std::to_string(k) + " is not 0 or 1", "increments");
        }
    }
}

std::vector<double> InnovationsPath::cumulative() const {
    std::vector<double> out(increments.size() + 1, 0.0);
    for (std::size_t k = 0; k < increments.size(); ++k) out[k + 1] = out[k] + increments[k];
    return out;
}

namespace {

ComplexMatrix finalize(const ComplexMatrix& rho) {
    ComplexMatrix out = hermitian_part(rho);
    const double tr = out.trace().real();
    if (!std::isfinite(tr) || std::abs(tr) < 1e-12) throw NumericalError("filter trace underflow");
    out /= tr;
    if (!is_finite(out)) throw NumericalError("filter state became non-finite");
    return out;
}

void require_positive_dt(double dt) {
    if (!(dt > 0.0)) throw ValidationError("time step must be positive", "dt");
}

// rho + (L' rho - J rho J† + r rho) dt, r = tr[J rho J†].
ComplexMatrix no_click(const ModulatedOperators& ops, const ComplexMatrix& rho, double dt) {
    const ComplexMatrix& j = ops.coupling;
    const ComplexMatrix jump = j * rho * j.adjoint();
    const double rate = jump.trace().real();
    return rho + (adjoint_generator(ops, rho) - jump + rate * rho) * dt;
}

}  // namespace

FilterState quad_filter_step(const FilterState& s, double dy, const HPModel& m, const CoherentInput& beta,
                             double dt) {
    require_positive_dt(dt);
    const auto ops = modulated_operators(m, beta(s.t));
    const ComplexMatrix& j = ops.coupling;
    const ComplexMatrix& rho = s.rho;
    const ComplexMatrix jr = j * rho;
    const double mean = 2.0 * jr.trace().real();
    const ComplexMatrix gain = jr + jr.adjoint() - mean * rho;
    const ComplexMatrix next = rho + adjoint_generator(ops, rho) * dt + gain * (dy - mean * dt);
    return {finalize(next), s.log_norm, s.t + dt};
}

FilterState count_filter_step(const FilterState& s, int dy, const HPModel& m, const CoherentInput& beta,
                              double dt) {
    require_positive_dt(dt);
    if (dy != 0 && dy != 1) throw ValidationError("counting increment must be 0 or 1", "increments");
    const auto ops = modulated_operators(m, beta(s.t));
    ComplexMatrix rho = s.rho;
    if (dy == 1) {
        const ComplexMatrix& j = ops.coupling;
        const ComplexMatrix jump = j * rho * j.adjoint();
        const double rate = jump.trace().real();
        if (rate < kRateFloor) {
            throw NumericalError("click recorded at t = " + std::to_string(s.t) + " where the jump rate is " +
                                 std::to_string(rate));
        }
        rho = finalize(jump / rate);
    }
    return {finalize(no_click(ops, rho, dt)), s.log_norm, s.t + dt};
}

FilterState filter_step(MeasurementKind kind, const FilterState& s, double dy, const HPModel& m,
                        const CoherentInput& beta, double dt) {
    if (kind == MeasurementKind::quadrature) return quad_filter_step(s, dy, m, beta, dt);
    if (dy != 0.0 && dy != 1.0) throw ValidationError("counting increment must be 0 or 1", "increments");
    return count_filter_step(s, static_cast<int>(dy), m, beta, dt);
}

// Zakai ----------------------------------------------------------------------

namespace {

struct ZakaiParts {
    ComplexMatrix drift;  // coefficient of dt
    ComplexMatrix gain;   // coefficient of dY
};

// Schrödinger-picture Zakai coefficients from the Girsanov pair (L~, K~) and
// the record coefficient R:
//   drift = R~ rho R~† + K~ rho + rho K~†        (quadrature, R~ = L~)
//   drift = K~ rho + rho K~†                      (counting)
//   gain  = L~ rho + rho L~†                      (quadrature)
//   gain  = R rho R† + R rho + rho R†             (counting, R = L~ / beta)
ZakaiParts zakai_parts(const ComplexMatrix& rho, const HPModel& m, complex beta, MeasurementKind kind,
                       const ZakaiOptions& options) {
    const auto g = girsanov_coefficients(m, beta, kind, options.beta_min);
    const ComplexMatrix& r = g.record_coefficient;
    const ComplexMatrix& k = g.tilde_drift;
    ZakaiParts out;
    out.drift = k * rho + rho * k.adjoint();
    if (kind == MeasurementKind::quadrature) {
        out.drift += r * rho * r.adjoint();
        out.gain = r * rho + rho * r.adjoint();
    } else {
        out.gain = r * rho * r.adjoint() + r * rho + rho * r.adjoint();
    }
    return out;
}

}  // namespace

ComplexMatrix zakai_increment(const FilterState& s, double dy, const HPModel& m, const CoherentInput& beta,
                              double dt, MeasurementKind kind, const ZakaiOptions& options) {
    const auto parts = zakai_parts(s.rho, m, beta(s.t), kind, options);
    return parts.drift * dt + parts.gain * dy;
}

FilterState zakai_step(const FilterState& s, double dy, const HPModel& m, const CoherentInput& beta, double dt,
                       MeasurementKind kind, const ZakaiOptions& options) {
    require_positive_dt(dt);
    const complex b = beta(s.t);

    if (kind == MeasurementKind::quadrature) {
        const auto parts = zakai_parts(s.rho, m, b, kind, options);
        const ComplexMatrix d_sigma = parts.drift * dt + parts.gain * dy;
        const double d_norm = d_sigma.trace().real();
        const double a = parts.gain.trace().real();
        // sigma / sigma(I) by the Itô quotient rule with (dY)^2 = dt:
        //   d pi = d sigma - pi d sigma(I) - a gain dt + a^2 pi dt.
        const ComplexMatrix next = s.rho + d_sigma - s.rho * d_norm - a * dt * parts.gain + (a * a * dt) * s.rho;
        return {finalize(next), s.log_norm + d_norm - 0.5 * a * a * dt, s.t + dt};
    }

    if (dy != 0.0 && dy != 1.0) throw ValidationError("counting increment must be 0 or 1", "increments");
    ComplexMatrix rho = s.rho;
    double log_norm = s.log_norm;
    if (dy == 1.0) {
        // A click multiplies sigma by (I + R) . (I + R)†, exactly.
        const auto parts = zakai_parts(rho, m, b, kind, options);
        const ComplexMatrix jumped = rho + parts.gain;
        const double factor = jumped.trace().real();
        if (factor * std::norm(b) < kRateFloor) {
            throw NumericalError("click recorded at t = " + std::to_string(s.t) + " where the jump rate vanishes");
        }
        rho = finalize(jumped / factor);
        log_norm += std::log(factor);
    }
    // No-click drift; the Itô cross terms are O(dt^2).
    const auto parts = zakai_parts(rho, m, b, kind, options);
    const ComplexMatrix d_sigma = parts.drift * dt;
    const double d_norm = d_sigma.trace().real();
    if (!(1.0 + d_norm > 0.0)) throw NumericalError("Zakai normalization underflow");
    const ComplexMatrix next = rho + d_sigma - rho * d_norm;
    return {finalize(next), log_norm + std::log1p(d_norm), s.t + dt};
}

// Gains and rates -------------------------------------------------------------

complex innovation_gain(MeasurementKind kind, const ComplexMatrix& rho, const HPModel& m, complex beta,
                        const ComplexMatrix& x) {
    const ComplexMatrix j = modulated_coupling(m, beta);
    const ComplexMatrix jd = j.adjoint();
    if (kind == MeasurementKind::quadrature) {
        return expectation(rho, x * j + jd * x) - expectation(rho, x) * expectation(rho, j + jd);
    }
    const complex rate = expectation(rho, jd * j);
    if (std::abs(rate) < kRateFloor) throw NumericalError("counting gain undefined at zero jump rate");
    return expectation(rho, jd * x * j) / rate - expectation(rho, x);
}

double predicted_rate(MeasurementKind kind, const ComplexMatrix& rho, const HPModel& m, complex beta) {
    const ComplexMatrix j = modulated_coupling(m, beta);
    if (kind == MeasurementKind::quadrature) return 2.0 * expectation(rho, j).real();
    return expectation(rho, j.adjoint() * j).real();
}

// Drivers ---------------------------------------------------------------------

SimulatedTrajectory simulate_record(const HPModel& m, const CoherentInput& beta, const DensityMatrix& rho0,
                                    MeasurementKind kind, const TimeGrid& grid, std::uint64_t seed) {
    grid.validate();
    require_same_dim(m.S(), rho0.matrix());
    Rng rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::uniform_real_distribution<double> uniform(0.0, 1.0);
    const double sqrt_dt = std::sqrt(grid.dt);

    SimulatedTrajectory out;
    out.record.kind = kind;
    out.record.grid = grid;
    out.record.increments.reserve(grid.steps);
    out.states.reserve(static_cast<std::size_t>(grid.steps) + 1);
    out.states.push_back(FilterState::from(rho0, grid.t0));
    if (kind == MeasurementKind::quadrature) out.noise.reserve(grid.steps);

    for (int k = 0; k < grid.steps; ++k) {
        const FilterState& s = out.states.back();
        const double rate = predicted_rate(kind, s.rho, m, beta(s.t));
        double dy = 0.0;
        if (kind == MeasurementKind::quadrature) {
            const double dw = sqrt_dt * normal(rng);
            out.noise.push_back(dw);
            dy = dw + rate * grid.dt;
        } else {
            const double p = rate * grid.dt;
            if (p > kMaxJumpProbability) {
                throw NumericalError("jump probability " + std::to_string(p) + " at t = " + std::to_string(s.t) +
                                     " exceeds 0.1; reduce dt");
            }
            dy = uniform(rng) < p ? 1.0 : 0.0;
        }
        out.record.increments.push_back(dy);
        FilterState next = filter_step(kind, s, dy, m, beta, grid.dt);
        next.t = grid.time(k + 1);
        out.states.push_back(std::move(next));
    }
    return out;
}

std::vector<FilterState> filter_record(const HPModel& m, const CoherentInput& beta, const DensityMatrix& rho0,
                                       const MeasurementRecord& record,
                                       std::optional<MeasurementKind> expected_kind) {
    if (expected_kind && *expected_kind != record.kind) {
        throw ValidationError("record kind '" + std::string(to_string(record.kind)) + "' does not match '" +
                              std::string(to_string(*expected_kind)) + "'", "measurement");
    }
    record.validate();
    require_same_dim(m.S(), rho0.matrix());
    const TimeGrid& grid = record.grid;
    std::vector<FilterState> states;
    states.reserve(static_cast<std::size_t>(grid.steps) + 1);
    states.push_back(FilterState::from(rho0, grid.t0));
    for (int k = 0; k < grid.steps; ++k) {
        FilterState next = filter_step(record.kind, states.back(), record.increments[k], m, beta, grid.dt);
        next.t = grid.time(k + 1);
        states.push_back(std::move(next));
    }
    return states;
}

std::vector<FilterState> zakai_record(const HPModel& m, const CoherentInput& beta, const DensityMatrix& rho0,
                                      const MeasurementRecord& record, const ZakaiOptions& options) {
    record.validate();
    require_same_dim(m.S(), rho0.matrix());
    const TimeGrid& grid = record.grid;
    std::vector<FilterState> states;
    states.reserve(static_cast<std::size_t>(grid.steps) + 1);
    states.push_back(FilterState::from(rho0, grid.t0));
    for (int k = 0; k < grid.steps; ++k) {
        FilterState next = zakai_step(states.back(), record.increments[k], m, beta, grid.dt, record.kind, options);
        next.t = grid.time(k + 1);
        states.push_back(std::move(next));
    }
    return states;
}

InnovationsPath innovations(const MeasurementRecord& record, const std::vector<FilterState>& states,
                            const HPModel& m, const CoherentInput& beta) {
    record.validate();
    if (states.size() != record.increments.size() + 1) {
        throw ValidationError("states are not aligned with the record (" + std::to_string(states.size()) +
                              " states for " + std::to_string(record.increments.size()) + " increments)", "states");
    }
    InnovationsPath out{record.grid, {}};
    out.increments.reserve(record.increments.size());
    for (std::size_t k = 0; k < record.increments.size(); ++k) {
        const FilterState& s = states[k];
        out.increments.push_back(record.increments[k] -
                                 predicted_rate(record.kind, s.rho, m, beta(s.t)) * record.grid.dt);
    }
    return out;
}

}  // namespace qfilter
