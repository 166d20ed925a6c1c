#include "qfilter/classical.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "qfilter/errors.hpp"

namespace qfilter::classical {

ClassicalModel linear_model(const LinearParams& p) {
    ClassicalModel m;
    m.name = "linear";
    m.drift = [a = p.a](const Vector& x) -> Vector { return a * x; };
    m.diffusion = [s = p.sigma](const Vector&) -> Matrix { return Matrix::Constant(1, 1, s); };
    m.observation = [c = p.c](const Vector& x) -> Vector { return c * x; };
    return m;
}

ClassicalModel double_well_model(const DoubleWellParams& p) {
    ClassicalModel m;
    m.name = "bistable-double-well";
    m.drift = [](const Vector& x) -> Vector { return x - x.array().cube().matrix(); };
    m.diffusion = [s = p.sigma](const Vector&) -> Matrix { return Matrix::Constant(1, 1, s); };
    m.observation = [c = p.c](const Vector& x) -> Vector { return c * x; };
    return m;
}

namespace {

Vector gaussian_vector(Eigen::Index n, Rng& rng) {
    std::normal_distribution<double> normal(0.0, 1.0);
    Vector v(n);
    for (Eigen::Index i = 0; i < n; ++i) v(i) = normal(rng);
    return v;
}

Vector euler_move(const ClassicalModel& model, const Vector& x, double dt, Rng& rng) {
    const Matrix diffusion = model.diffusion(x);
    return x + model.drift(x) * dt + diffusion * gaussian_vector(diffusion.cols(), rng) * std::sqrt(dt);
}

}  // namespace

ClassicalPath simulate_pair(const ClassicalModel& model, const Vector& x0, const TimeGrid& grid,
                            std::uint64_t seed) {
    grid.validate();
    Rng rng(seed);
    ClassicalPath path{grid, {x0}, {}};
    path.states.reserve(static_cast<std::size_t>(grid.steps) + 1);
    path.observations.reserve(grid.steps);
    const double sqrt_dt = std::sqrt(grid.dt);
    for (int k = 0; k < grid.steps; ++k) {
        Vector next = euler_move(model, path.states.back(), grid.dt, rng);
        // The observation over [t_k, t_k+1] reads h at the propagated state,
        // matching the propagate-then-reweight order of particle_step.
        const Vector h = model.observation(next);
        path.observations.push_back(h * grid.dt + gaussian_vector(h.size(), rng) * sqrt_dt);
        path.states.push_back(std::move(next));
    }
    return path;
}

// Particles ------------------------------------------------------------------

std::vector<double> ParticleEnsemble::weights() const {
    if (log_weights.empty()) throw NumericalError("empty particle ensemble");
    const double top = *std::max_element(log_weights.begin(), log_weights.end());
    if (!std::isfinite(top)) throw NumericalError("degenerate particle weights");
    std::vector<double> w(log_weights.size());
    double total = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i) {
        w[i] = std::exp(log_weights[i] - top);
        total += w[i];
    }
    for (auto& x : w) x /= total;
    return w;
}

double ParticleEnsemble::effective_sample_size() const {
    const auto w = weights();
    double sq = 0.0;
    for (double x : w) sq += x * x;
    return 1.0 / sq;
}

ParticleEnsemble gaussian_ensemble(int n, const Vector& mean, const Vector& variance, Rng& rng) {
    if (n < 1) throw ValidationError("ensemble needs at least one particle", "particles");
    ParticleEnsemble e;
    e.positions.reserve(n);
    e.log_weights.assign(n, 0.0);
    const Vector sd = variance.cwiseMax(0.0).cwiseSqrt();
    for (int i = 0; i < n; ++i) {
        e.positions.push_back(mean + sd.cwiseProduct(gaussian_vector(mean.size(), rng)));
    }
    return e;
}

namespace {

void systematic_resample(ParticleEnsemble& e, Rng& rng) {
    const auto w = e.weights();
    const std::size_t n = w.size();
    std::uniform_real_distribution<double> uniform(0.0, 1.0 / static_cast<double>(n));
    double u = uniform(rng);
    std::vector<Vector> chosen;
    chosen.reserve(n);
    double cumulative = w[0];
    std::size_t j = 0;
    for (std::size_t i = 0; i < n; ++i) {
        while (u > cumulative && j + 1 < n) cumulative += w[++j];
        chosen.push_back(e.positions[j]);
        u += 1.0 / static_cast<double>(n);
    }
    e.positions = std::move(chosen);
    std::fill(e.log_weights.begin(), e.log_weights.end(), 0.0);
}

}  // namespace

ParticleEnsemble particle_step(const ParticleEnsemble& e, const Vector& dy, const ClassicalModel& model,
                               double dt, Rng& rng) {
    if (!(dt > 0.0)) throw ValidationError("time step must be positive", "dt");
    ParticleEnsemble next;
    next.t = e.t + dt;
    next.positions.reserve(e.size());
    next.log_weights.reserve(e.size());
    for (std::size_t i = 0; i < e.size(); ++i) {
        Vector x = euler_move(model, e.positions[i], dt, rng);
        const Vector h = model.observation(x);
        next.log_weights.push_back(e.log_weights[i] + h.dot(dy) - 0.5 * h.squaredNorm() * dt);
        next.positions.push_back(std::move(x));
    }
    const bool all_dead = std::none_of(next.log_weights.begin(), next.log_weights.end(),
                                       [](double lw) { return std::isfinite(lw); });
    if (all_dead) throw NumericalError("all particle weights vanished");
    if (next.effective_sample_size() < 0.5 * static_cast<double>(next.size())) systematic_resample(next, rng);
    return next;
}

double posterior(const ParticleEnsemble& e, const std::function<double(const Vector&)>& f) {
    const auto w = e.weights();
    double acc = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i) acc += w[i] * f(e.positions[i]);
    return acc;
}

Vector posterior_mean(const ParticleEnsemble& e, const std::function<Vector(const Vector&)>& f) {
    const auto w = e.weights();
    Vector acc = w[0] * f(e.positions[0]);
    for (std::size_t i = 1; i < w.size(); ++i) acc += w[i] * f(e.positions[i]);
    return acc;
}

double posterior_variance(const ParticleEnsemble& e, int index) {
    const auto w = e.weights();
    double mean = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i) mean += w[i] * e.positions[i](index);
    double var = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i) {
        const double d = e.positions[i](index) - mean;
        var += w[i] * d * d;
    }
    return var;
}

// Kalman-Bucy ------------------------------------------------------------------

KalmanState kalman_bucy_step(const KalmanState& k, const Vector& dy, const Matrix& a, const Matrix& c,
                             const Matrix& sigma, double dt) {
    const Matrix& p = k.covariance;
    KalmanState next;
    next.mean = k.mean + a * k.mean * dt + p * c.transpose() * (dy - c * k.mean * dt);
    next.covariance = p + (a * p + p * a.transpose() + sigma * sigma.transpose() -
                           p * c.transpose() * c * p) * dt;
    next.covariance = 0.5 * (next.covariance + next.covariance.transpose());
    return next;
}

KalmanState kalman_bucy_step(const KalmanState& k, double dy, double a, double c, double sigma, double dt) {
    return kalman_bucy_step(k, Vector::Constant(1, dy), Matrix::Constant(1, 1, a), Matrix::Constant(1, 1, c),
                            Matrix::Constant(1, 1, sigma), dt);
}

double riccati_steady_state(double a, double c, double sigma) {
    if (c == 0.0) throw ValidationError("steady-state Riccati solution needs c != 0", "c");
    return (a + std::sqrt(a * a + c * c * sigma * sigma)) / (c * c);
}

// Innovations ------------------------------------------------------------------

std::vector<double> ClassicalInnovations::cumulative(int index) const {
    std::vector<double> out(increments.size() + 1, 0.0);
    for (std::size_t k = 0; k < increments.size(); ++k) out[k + 1] = out[k] + increments[k](index);
    return out;
}

ClassicalInnovations classical_innovations(const std::vector<Vector>& observations,
                                           const std::vector<Vector>& predicted_h, const TimeGrid& grid) {
    grid.validate();
    if (observations.size() != static_cast<std::size_t>(grid.steps) || predicted_h.size() != observations.size()) {
        throw ValidationError("observations and filter estimates are not aligned with the grid", "observations");
    }
    ClassicalInnovations out{grid, {}};
    out.increments.reserve(observations.size());
    for (std::size_t k = 0; k < observations.size(); ++k) {
        out.increments.push_back(observations[k] - predicted_h[k] * grid.dt);
    }
    return out;
}

}  // namespace qfilter::classical
