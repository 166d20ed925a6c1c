#pragma once

// Monte Carlo harness over independent filter trajectories.

#include <cstdint>
#include <vector>

#include "qfilter/master.hpp"
#include "qfilter/model.hpp"
#include "qfilter/trajectory.hpp"

namespace qfilter {

struct EnsembleConfig {
    int trajectories = 1;
    std::uint64_t master_seed = 0;
    HPModel model;
    CoherentInput beta;
    DensityMatrix rho0;
    TimeGrid grid;
    MeasurementKind kind = MeasurementKind::quadrature;
    std::vector<NamedObservable> observables;
    /// Added as bias * dt to every record increment before the innovations
    /// are formed. Zero for honest runs; nonzero only for negative controls.
    double record_bias = 0.0;
    /// Worker threads; 0 picks std::thread::hardware_concurrency().
    int threads = 0;
    /// Integrate the master equation on the same grid and report distances.
    bool compare_master = true;

    /// Throws ValidationError for N < 1, grid or dimension problems.
    void validate() const;
};

struct EnsembleReport {
    TimeGrid grid;
    int trajectories = 0;
    MeasurementKind kind = MeasurementKind::quadrature;

    /// Average conditional state per grid point (steps + 1).
    std::vector<ComplexMatrix> mean_states;

    std::vector<std::string> observable_names;
    /// [observable][k]: mean of Re tr(rho_k X) and its standard error.
    std::vector<std::vector<double>> observable_mean;
    std::vector<std::vector<double>> observable_stderr;

    /// Cumulative innovations I(t_k): sample mean and standard error.
    std::vector<double> innovation_mean;
    std::vector<double> innovation_stderr;
    /// Cumulative record Y(t_k): sample mean and standard error.
    std::vector<double> record_mean;
    std::vector<double> record_stderr;

    /// Trace distance between mean_states[k] and the master solution; empty
    /// when the comparison was not requested.
    std::vector<double> trace_distance;
    double max_trace_distance = 0.0;
};

/// seed_i = splitmix64(master_seed + (i + 1) * 0x9E3779B97F4A7C15), the i-th
/// output of a splitmix64 stream started at master_seed.
std::uint64_t trajectory_seed(std::uint64_t master_seed, std::uint64_t index);

/// Runs `trajectories` independent simulate_record paths. Trajectories run in
/// fixed-size blocks, possibly concurrently, and are folded into the report in
/// index order, so the result is bit-identical for any thread count. A failing
/// trajectory aborts the run with the same error type and its index prefixed
/// to the message.
EnsembleReport run_ensemble(const EnsembleConfig& cfg);

struct MartingaleResult {
    bool pass = false;
    double max_abs_z = 0.0;
    std::vector<int> checkpoints;  ///< grid indices
    std::vector<double> z;
};

inline constexpr int kMartingaleCheckpoints = 50;
inline constexpr double kMartingaleThreshold = 4.0;
inline constexpr int kMartingaleMinTrajectories = 100;

/// z-scores of a mean path at `checkpoints` evenly spaced grid indices
/// (excluding t = 0). Passes iff every |z| <= threshold. A zero standard
/// error counts as z = 0 when the mean is zero and as infinite otherwise.
/// Throws ValidationError when fewer than 100 samples were averaged.
MartingaleResult martingale_test(const std::vector<double>& mean, const std::vector<double>& stderr_,
                                 int samples, int checkpoints = kMartingaleCheckpoints,
                                 double threshold = kMartingaleThreshold);

/// Martingale test on the report's cumulative innovations.
MartingaleResult martingale_test(const EnsembleReport& report, int checkpoints = kMartingaleCheckpoints,
                                 double threshold = kMartingaleThreshold);

/// Running mean and standard error, accumulated in a fixed order.
class RunningMoments {
public:
    explicit RunningMoments(std::size_t size = 0) : mean_(size, 0.0), m2_(size, 0.0) {}

    /// Welford update with one sample path of length size().
    void add(const std::vector<double>& sample);

    std::size_t size() const { return mean_.size(); }
    long count() const { return count_; }
    const std::vector<double>& mean() const { return mean_; }
    /// sqrt(sample variance / n); zero for n < 2.
    std::vector<double> standard_error() const;

private:
    long count_ = 0;
    std::vector<double> mean_;
    std::vector<double> m2_;
};

}  // namespace qfilter
