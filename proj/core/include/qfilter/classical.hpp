#pragma once

// Classical nonlinear filtering benchmark:
//
//     dX = v(X) dt + sigma_X(X) dW_proc,      dY = h(X) dt + dW_obs
//
// with a weighted particle approximation of the Zakai / Kushner-Stratonovich
// filter and the Kalman-Bucy filter as the linear-Gaussian oracle.

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "qfilter/master.hpp"
#include "qfilter/random.hpp"

namespace qfilter::classical {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

struct ClassicalModel {
    std::string name;
    int state_dim = 1;
    int obs_dim = 1;
    std::function<Vector(const Vector&)> drift;
    std::function<Matrix(const Vector&)> diffusion;  ///< state_dim x noise_dim
    std::function<Vector(const Vector&)> observation;
};

/// dX = a X dt + sigma dW, dY = c X dt + dV.
struct LinearParams {
    double a = -1.0;
    double c = 1.0;
    double sigma = 1.0;
};

/// dX = (X - X^3) dt + sigma dW, dY = c X dt + dV. Wells at +-1.
struct DoubleWellParams {
    double sigma = 0.5;
    double c = 1.0;
};

ClassicalModel linear_model(const LinearParams& p);
ClassicalModel double_well_model(const DoubleWellParams& p);

struct ClassicalPath {
    TimeGrid grid;
    std::vector<Vector> states;        ///< steps + 1
    std::vector<Vector> observations;  ///< increments dY_k, steps entries
};

/// Euler-Maruyama with independent process and observation noise.
ClassicalPath simulate_pair(const ClassicalModel& model, const Vector& x0, const TimeGrid& grid,
                            std::uint64_t seed);

struct ParticleEnsemble {
    std::vector<Vector> positions;
    std::vector<double> log_weights;
    double t = 0.0;

    std::size_t size() const { return positions.size(); }
    /// Normalized weights, exp(log_w - max) / sum.
    std::vector<double> weights() const;
    double effective_sample_size() const;
};

/// N particles drawn from N(mean, diag(variance)).
ParticleEnsemble gaussian_ensemble(int n, const Vector& mean, const Vector& variance, Rng& rng);

/// Propagate by Euler-Maruyama, reweight by h(x)·dY - ½|h(x)|^2 dt, and
/// resample systematically when the effective sample size drops below N/2.
/// Throws NumericalError if every weight is zero.
ParticleEnsemble particle_step(const ParticleEnsemble& e, const Vector& dy, const ClassicalModel& model,
                               double dt, Rng& rng);

/// Weighted mean of f. Throws NumericalError for an empty or degenerate ensemble.
double posterior(const ParticleEnsemble& e, const std::function<double(const Vector&)>& f);
Vector posterior_mean(const ParticleEnsemble& e, const std::function<Vector(const Vector&)>& f);
/// Weighted variance of state component `index`.
double posterior_variance(const ParticleEnsemble& e, int index = 0);

struct KalmanState {
    Vector mean;
    Matrix covariance;
};

/// Euler step of the Kalman-Bucy filter for dX = A X dt + Sigma dW,
/// dY = C X dt + dV:
///   mean += A mean dt + P C^T (dY - C mean dt)
///   P    += (A P + P A^T + Sigma Sigma^T - P C^T C P) dt
KalmanState kalman_bucy_step(const KalmanState& k, const Vector& dy, const Matrix& a, const Matrix& c,
                             const Matrix& sigma, double dt);
/// Scalar convenience overload.
KalmanState kalman_bucy_step(const KalmanState& k, double dy, double a, double c, double sigma, double dt);

/// Fixed point of 2aP + sigma^2 - c^2 P^2 = 0 with P >= 0:
/// (a + sqrt(a^2 + c^2 sigma^2)) / c^2.
double riccati_steady_state(double a, double c, double sigma);

struct ClassicalInnovations {
    TimeGrid grid;
    std::vector<Vector> increments;

    /// Component `index` of I(t_k), k = 0..steps.
    std::vector<double> cumulative(int index = 0) const;
};

/// dI_k = dY_k - pi_k(h) dt. `predicted_h[k]` is the filter's estimate of h
/// at t_k; both lists need one entry per step.
ClassicalInnovations classical_innovations(const std::vector<Vector>& observations,
                                           const std::vector<Vector>& predicted_h, const TimeGrid& grid);

}  // namespace qfilter::classical
