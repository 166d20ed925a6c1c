#include "qfilter/ensemble.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <string>
#include <thread>

#include "qfilter/random.hpp"

namespace qfilter {

void EnsembleConfig::validate() const {
    if (trajectories < 1) throw ValidationError("ensemble needs at least one trajectory", "trajectories");
    if (threads < 0) throw ValidationError("thread count must be nonnegative", "threads");
    if (!std::isfinite(record_bias)) throw ValidationError("record bias must be finite", "record_bias");
    grid.validate();
    require_same_dim(model.S(), rho0.matrix());
    for (const auto& obs : observables) {
        if (dim_of(obs.matrix) != model.dim()) {
            throw ValidationError("observable '" + obs.name + "' has the wrong dimension", "observables");
        }
    }
}

std::uint64_t trajectory_seed(std::uint64_t master_seed, std::uint64_t index) {
    return splitmix64(master_seed + (index + 1) * 0x9E3779B97F4A7C15ULL);
}

void RunningMoments::add(const std::vector<double>& sample) {
    if (sample.size() != mean_.size()) throw DimensionError("sample path has the wrong length");
    ++count_;
    const double n = static_cast<double>(count_);
    for (std::size_t i = 0; i < sample.size(); ++i) {
        const double delta = sample[i] - mean_[i];
        mean_[i] += delta / n;
        m2_[i] += delta * (sample[i] - mean_[i]);
    }
}

std::vector<double> RunningMoments::standard_error() const {
    std::vector<double> out(mean_.size(), 0.0);
    if (count_ < 2) return out;
    const double n = static_cast<double>(count_);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = std::sqrt(std::max(m2_[i], 0.0) / (n - 1.0) / n);
    return out;
}

namespace {

struct TrajectorySummary {
    std::vector<ComplexMatrix> states;
    std::vector<std::vector<double>> observables;
    std::vector<double> innovations;
    std::vector<double> record;
};

TrajectorySummary run_one(const EnsembleConfig& cfg, std::size_t index) {
    const auto traj = simulate_record(cfg.model, cfg.beta, cfg.rho0, cfg.kind, cfg.grid,
                                      trajectory_seed(cfg.master_seed, index));
    // The bias shifts the reported record and its innovations. The filter
    // itself runs on the honest record, since a shifted counting record is
    // no longer 0/1.
    MeasurementRecord shown = traj.record;
    for (double& dy : shown.increments) dy += cfg.record_bias * cfg.grid.dt;
    auto innov = innovations(traj.record, traj.states, cfg.model, cfg.beta);
    for (double& di : innov.increments) di += cfg.record_bias * cfg.grid.dt;

    TrajectorySummary out;
    out.states.reserve(traj.states.size());
    for (const auto& s : traj.states) out.states.push_back(s.rho);
    out.observables.resize(cfg.observables.size());
    for (std::size_t o = 0; o < cfg.observables.size(); ++o) {
        auto& column = out.observables[o];
        column.reserve(traj.states.size());
        for (const auto& s : traj.states) column.push_back(expectation(s.rho, cfg.observables[o].matrix).real());
    }
    out.innovations = innov.cumulative();
    out.record.assign(shown.increments.size() + 1, 0.0);
    for (std::size_t k = 0; k < shown.increments.size(); ++k) out.record[k + 1] = out.record[k] + shown.increments[k];
    return out;
}

[[noreturn]] void rethrow_with_index(std::exception_ptr error, std::size_t index) {
    const std::string prefix = "trajectory " + std::to_string(index) + ": ";
    try {
        std::rethrow_exception(error);
    } catch (const ValidationError& e) {
        throw ValidationError(prefix + e.what(), e.key());
    } catch (const DimensionError& e) {
        throw DimensionError(prefix + e.what());
    } catch (const NumericalError& e) {
        throw NumericalError(prefix + e.what());
    } catch (const std::exception& e) {
        throw std::runtime_error(prefix + e.what());
    }
}

constexpr std::size_t kBlockSize = 64;

}  // namespace

EnsembleReport run_ensemble(const EnsembleConfig& cfg) {
    cfg.validate();
    const std::size_t n = static_cast<std::size_t>(cfg.trajectories);
    const std::size_t points = static_cast<std::size_t>(cfg.grid.steps) + 1;
    const int d = cfg.model.dim();
    int threads = cfg.threads > 0 ? cfg.threads : static_cast<int>(std::thread::hardware_concurrency());
    threads = std::max(1, threads);

    std::vector<ComplexMatrix> state_sum(points, ComplexMatrix::Zero(d, d));
    std::vector<RunningMoments> obs_moments(cfg.observables.size(), RunningMoments(points));
    RunningMoments innov_moments(points);
    RunningMoments record_moments(points);

    std::vector<TrajectorySummary> block(kBlockSize);
    std::vector<std::exception_ptr> errors(kBlockSize);

    for (std::size_t start = 0; start < n; start += kBlockSize) {
        const std::size_t count = std::min(kBlockSize, n - start);
        std::fill(errors.begin(), errors.end(), nullptr);
        std::atomic<std::size_t> next{0};
        auto worker = [&] {
            for (std::size_t j = next++; j < count; j = next++) {
                try {
                    block[j] = run_one(cfg, start + j);
                } catch (...) {
                    errors[j] = std::current_exception();
                }
            }
        };
        const int spawn = std::min<int>(threads, static_cast<int>(count)) - 1;
        std::vector<std::thread> pool;
        pool.reserve(std::max(spawn, 0));
        for (int w = 0; w < spawn; ++w) pool.emplace_back(worker);
        worker();
        for (auto& t : pool) t.join();

        for (std::size_t j = 0; j < count; ++j) {
            if (errors[j]) rethrow_with_index(errors[j], start + j);
            const auto& summary = block[j];
            for (std::size_t k = 0; k < points; ++k) state_sum[k] += summary.states[k];
            for (std::size_t o = 0; o < obs_moments.size(); ++o) obs_moments[o].add(summary.observables[o]);
            innov_moments.add(summary.innovations);
            record_moments.add(summary.record);
        }
    }

    EnsembleReport report;
    report.grid = cfg.grid;
    report.trajectories = cfg.trajectories;
    report.kind = cfg.kind;
    report.mean_states.reserve(points);
    for (auto& s : state_sum) report.mean_states.push_back(s / static_cast<double>(n));
    for (std::size_t o = 0; o < obs_moments.size(); ++o) {
        report.observable_names.push_back(cfg.observables[o].name);
        report.observable_mean.push_back(obs_moments[o].mean());
        report.observable_stderr.push_back(obs_moments[o].standard_error());
    }
    report.innovation_mean = innov_moments.mean();
    report.innovation_stderr = innov_moments.standard_error();
    report.record_mean = record_moments.mean();
    report.record_stderr = record_moments.standard_error();

    if (cfg.compare_master) {
        const auto master = integrate_master(cfg.model, cfg.beta, cfg.rho0, cfg.grid);
        report.trace_distance.reserve(points);
        for (std::size_t k = 0; k < points; ++k) {
            const double dist = trace_distance(report.mean_states[k], master.states[k].matrix());
            report.trace_distance.push_back(dist);
            report.max_trace_distance = std::max(report.max_trace_distance, dist);
        }
    }
    return report;
}

MartingaleResult martingale_test(const std::vector<double>& mean, const std::vector<double>& stderr_,
                                 int samples, int checkpoints, double threshold) {
    if (samples < kMartingaleMinTrajectories) {
        throw ValidationError("martingale test needs at least " + std::to_string(kMartingaleMinTrajectories) +
                              " trajectories, got " + std::to_string(samples), "trajectories");
    }
    if (mean.size() != stderr_.size() || mean.size() < 2) {
        throw ValidationError("mean and standard error paths must align and cover at least one step", "innovations");
    }
    if (checkpoints < 1) throw ValidationError("need at least one checkpoint", "checkpoints");
    const int steps = static_cast<int>(mean.size()) - 1;
    MartingaleResult out;
    out.pass = true;
    for (int c = 1; c <= checkpoints; ++c) {
        const int k = std::max(1, static_cast<int>(std::lround(static_cast<double>(c) * steps / checkpoints)));
        if (!out.checkpoints.empty() && out.checkpoints.back() == k) continue;
        double z = 0.0;
        if (stderr_[k] > 0.0) {
            z = mean[k] / stderr_[k];
        } else if (mean[k] != 0.0) {
            z = std::numeric_limits<double>::infinity();
        }
        out.checkpoints.push_back(k);
        out.z.push_back(z);
        out.max_abs_z = std::max(out.max_abs_z, std::abs(z));
        if (!(std::abs(z) <= threshold)) out.pass = false;
    }
    return out;
}

MartingaleResult martingale_test(const EnsembleReport& report, int checkpoints, double threshold) {
    return martingale_test(report.innovation_mean, report.innovation_stderr, report.trajectories, checkpoints,
                           threshold);
}

}  // namespace qfilter
