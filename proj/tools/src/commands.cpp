#include "qfilter_cli/commands.hpp"

#include <cmath>
#include <iostream>
#include <sstream>
#include <utility>
#include <vector>

#include <json.hpp>

#include "qfilter/classical.hpp"
#include "qfilter/ensemble.hpp"
#include "qfilter/identities.hpp"
#include "qfilter/io.hpp"
#include "qfilter/master.hpp"
#include "qfilter/trajectory.hpp"
#include "qfilter_cli/config.hpp"

namespace qfilter::cli {

namespace {

constexpr double kVerifyTolerance = 1e-9;

// Files are staged in memory and only written once every output of the
// command has been computed.
using Outputs = std::vector<std::pair<std::string, std::string>>;

void commit(const CommandOptions& options, const Outputs& files, std::ostream& out) {
    std::filesystem::create_directories(options.out);
    for (const auto& [name, content] : files) {
        const auto path = options.out / name;
        write_file_atomically(path, content);
        out << "wrote " << path.string() << '\n';
    }
}

RunConfig load(const CommandOptions& options) {
    if (!options.config) throw ValidationError("--config is required for this command", "config");
    return parse_config(*options.config);
}

std::vector<ComplexMatrix> matrices(const std::vector<FilterState>& states) {
    std::vector<ComplexMatrix> out;
    out.reserve(states.size());
    for (const auto& s : states) out.push_back(s.rho);
    return out;
}

std::string state_csv(const QuantumSection& q, const TimeGrid& grid, const std::vector<FilterState>& states,
                      const MeasurementRecord& record) {
    const auto innov = innovations(record, states, q.model, q.beta);
    std::ostringstream csv;
    write_state_csv(csv, grid, matrices(states), q.observables, innov.cumulative());
    return csv.str();
}

int run_master(const CommandOptions& options, std::ostream& out) {
    const RunConfig cfg = load(options);
    const auto& q = cfg.require_quantum("master");
    const auto traj = integrate_master(q.model, q.beta, q.rho0, cfg.grid);
    std::vector<ComplexMatrix> states;
    states.reserve(traj.states.size());
    for (const auto& s : traj.states) states.push_back(s.matrix());
    std::ostringstream csv;
    write_state_csv(csv, cfg.grid, states, q.observables);
    commit(options, {{"master.csv", csv.str()}}, out);
    return kExitOk;
}

int run_simulate(const CommandOptions& options, std::ostream& out) {
    const RunConfig cfg = load(options);
    const auto& q = cfg.require_quantum("simulate");
    const auto traj = simulate_record(q.model, q.beta, q.rho0, q.kind, cfg.grid, options.seed);
    std::ostringstream record;
    write_record(record, traj.record);
    commit(options, {{"record.csv", record.str()}, {"states.csv", state_csv(q, cfg.grid, traj.states, traj.record)}},
           out);
    return kExitOk;
}

int run_filter(const CommandOptions& options, std::ostream& out) {
    const RunConfig cfg = load(options);
    const auto& q = cfg.require_quantum("filter");
    const auto record = read_record_file(options.record.value_or(options.out / "record.csv"));
    const auto states = filter_record(q.model, q.beta, q.rho0, record, q.kind);
    commit(options, {{"filtered.csv", state_csv(q, record.grid, states, record)}}, out);
    return kExitOk;
}

int run_ensemble_command(const CommandOptions& options, std::ostream& out) {
    const RunConfig cfg = load(options);
    const auto& q = cfg.require_quantum("ensemble");
    EnsembleConfig ec{
        .trajectories = options.trajectories.value_or(cfg.ensemble.trajectories),
        .master_seed = options.seed,
        .model = q.model,
        .beta = q.beta,
        .rho0 = q.rho0,
        .grid = cfg.grid,
        .kind = q.kind,
        .observables = q.observables,
        .record_bias = 0.0,
        .threads = cfg.ensemble.threads,
        .compare_master = true,
    };
    const auto report = run_ensemble(ec);

    nlohmann::json summary;
    summary["trajectories"] = report.trajectories;
    summary["seed"] = options.seed;
    summary["measurement"] = to_string(report.kind);
    summary["dt"] = report.grid.dt;
    summary["steps"] = report.grid.steps;
    summary["max_trace_distance_to_master"] = report.max_trace_distance;
    const std::size_t last = report.mean_states.size() - 1;
    for (std::size_t o = 0; o < report.observable_names.size(); ++o) {
        summary["final"][report.observable_names[o]] = {{"mean", report.observable_mean[o][last]},
                                                        {"stderr", report.observable_stderr[o][last]}};
    }
    summary["final"]["innovation"] = {{"mean", report.innovation_mean[last]},
                                      {"stderr", report.innovation_stderr[last]}};
    summary["final"]["record"] = {{"mean", report.record_mean[last]}, {"stderr", report.record_stderr[last]}};
    if (report.trajectories >= kMartingaleMinTrajectories) {
        const auto mt = martingale_test(report);
        summary["martingale"] = {{"pass", mt.pass}, {"max_abs_z", mt.max_abs_z}, {"checkpoints", mt.checkpoints.size()}};
    } else {
        summary["martingale"] = nullptr;
    }

    std::ostringstream csv;
    write_ensemble_csv(csv, report);
    commit(options, {{"ensemble.csv", csv.str()}, {"ensemble.json", summary.dump(2) + "\n"}}, out);
    out << "max trace distance to master: " << report.max_trace_distance << '\n';
    return kExitOk;
}

int run_classical(const CommandOptions& options, std::ostream& out) {
    const RunConfig cfg = load(options);
    if (!cfg.classical) throw ValidationError("command 'classical' needs a 'classical' section", "classical");
    const ClassicalSection& c = *cfg.classical;
    const auto model = c.model();
    const TimeGrid& grid = cfg.grid;
    using classical::Vector;

    const auto path = classical::simulate_pair(model, Vector::Constant(1, c.x0), grid, options.seed);
    Rng rng(trajectory_seed(options.seed, 0));
    auto ensemble = classical::gaussian_ensemble(c.particles, Vector::Constant(1, c.prior_mean),
                                                 Vector::Constant(1, c.prior_variance), rng);
    const bool linear = c.preset == "linear";
    classical::KalmanState kalman{Vector::Constant(1, c.prior_mean), classical::Matrix::Constant(1, 1, c.prior_variance)};

    std::ostringstream csv;
    csv << "t,x,y,pf_mean,pf_variance,ess" << (linear ? ",kb_mean,kb_variance" : "") << ",innovation\n";
    double y = 0.0;
    double innovation = 0.0;
    auto h = [&](const Vector& x) { return model.observation(x)(0); };
    for (int k = 0;; ++k) {
        csv << format_double(grid.time(k)) << ',' << format_double(path.states[k](0)) << ',' << format_double(y) << ','
            << format_double(classical::posterior(ensemble, [](const Vector& x) { return x(0); })) << ','
            << format_double(classical::posterior_variance(ensemble)) << ','
            << format_double(ensemble.effective_sample_size());
        if (linear) csv << ',' << format_double(kalman.mean(0)) << ',' << format_double(kalman.covariance(0, 0));
        csv << ',' << format_double(innovation) << '\n';
        if (k == grid.steps) break;

        const Vector& dy = path.observations[k];
        innovation += dy(0) - classical::posterior(ensemble, h) * grid.dt;
        y += dy(0);
        ensemble = classical::particle_step(ensemble, dy, model, grid.dt, rng);
        if (linear) kalman = classical::kalman_bucy_step(kalman, dy(0), c.linear.a, c.linear.c, c.linear.sigma, grid.dt);
    }
    commit(options, {{"classical.csv", csv.str()}}, out);
    return kExitOk;
}

int run_verify(const CommandOptions& options, std::ostream& out) {
    SuiteOptions qprob{options.seed, 100, {2, 4, 8}};
    SuiteOptions ito{options.seed, 100, {2, 3, 4}};
    if (options.dims_check) {
        qprob.dims = ito.dims = {2, 3, 4, 5, 6, 7, 8};
    }
    bool pass = write_report(out, run_qprob_suite(qprob), kVerifyTolerance);
    pass = write_report(out, run_ito_suite(ito), kVerifyTolerance) && pass;
    out << (pass ? "all identities within " : "identity residuals exceed ") << kVerifyTolerance << '\n';
    return pass ? kExitOk : kExitNumerical;
}

int report_error(std::ostream& err, const std::string& key, const std::string& what, int code) {
    err << "error: ";
    if (!key.empty()) err << key << ": ";
    err << what << '\n';
    return code;
}

}  // namespace

int dispatch(const std::string& command, const CommandOptions& options, std::ostream& out, std::ostream& err) {
    try {
        if (command == "master") return run_master(options, out);
        if (command == "simulate") return run_simulate(options, out);
        if (command == "filter") return run_filter(options, out);
        if (command == "ensemble") return run_ensemble_command(options, out);
        if (command == "classical") return run_classical(options, out);
        if (command == "verify") return run_verify(options, out);
        return report_error(err, "", "unknown command '" + command + "'", kExitValidation);
    } catch (const ConfigError& e) {
        for (const auto& [key, message] : e.issues()) report_error(err, key, message, kExitValidation);
        return kExitValidation;
    } catch (const ValidationError& e) {
        return report_error(err, e.key(), e.what(), kExitValidation);
    } catch (const DimensionError& e) {
        return report_error(err, "", e.what(), kExitValidation);
    } catch (const NumericalError& e) {
        return report_error(err, "", e.what(), kExitNumerical);
    } catch (const std::filesystem::filesystem_error& e) {
        return report_error(err, "", e.what(), kExitValidation);
    }
}

std::string output_formats_help() {
    return R"(Outputs (written under --out, CSV with LF endings, doubles in shortest round-trip form):
  master     master.csv     t,<observables>,trace,purity
  simulate   record.csv     kind,dt,steps / <values> / one increment per line
             states.csv     t,<observables>,trace,purity,innovation
  filter     filtered.csv   same columns as states.csv (reads --record, default <out>/record.csv)
  ensemble   ensemble.csv   t,<obs>_mean,<obs>_stderr...,innovation_mean,innovation_stderr,
                            record_mean,record_stderr,trace_distance
             ensemble.json  summary: final means, martingale test, distance to master
  classical  classical.csv  t,x,y,pf_mean,pf_variance,ess[,kb_mean,kb_variance],innovation
  verify     stdout         one line per identity: name residual PASS|FAIL (tolerance 1e-9)
Exit codes: 0 success, 1 validation error, 2 numerical failure.)";
}

}  // namespace qfilter::cli
