#pragma once

// JSON run configuration for the qfilter command-line tool.
//
//   {
//     "model":        {"dim": 2, "S": "identity", "L": [[0, 0], [1, 0]], "H": "zero"},
//     "beta":         {"kind": "constant", "value": [0.5, 0]},
//     "rho0":         "excited",
//     "grid":         {"dt": 0.001, "T": 5},
//     "measurement":  "quadrature",
//     "observables":  ["P_e", "sigma_x", {"name": "X", "matrix": [[0, 1], [1, 0]]}],
//     "ensemble":     {"trajectories": 1000, "threads": 0},
//     "classical":    {"preset": "linear", "particles": 1000}
//   }
//
// Matrix entries are numbers or [re, im] pairs, rows first. "identity" and
// "zero" are accepted for any matrix.

#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qfilter/classical.hpp"
#include "qfilter/master.hpp"
#include "qfilter/model.hpp"

namespace qfilter::cli {

/// All schema problems found in one config. `key()` is the first offending
/// key path; `issues()` lists every (key path, message) pair.
class ConfigError : public ValidationError {
public:
    explicit ConfigError(std::vector<std::pair<std::string, std::string>> issues);

    const std::vector<std::pair<std::string, std::string>>& issues() const noexcept { return issues_; }

private:
    std::vector<std::pair<std::string, std::string>> issues_;
};

struct QuantumSection {
    HPModel model;
    CoherentInput beta;
    DensityMatrix rho0;
    MeasurementKind kind;
    std::vector<NamedObservable> observables;
};

struct EnsembleSection {
    int trajectories = 100;
    int threads = 0;
};

struct ClassicalSection {
    std::string preset = "linear";
    classical::LinearParams linear;
    classical::DoubleWellParams double_well;
    int particles = 1000;
    double x0 = 0.0;
    double prior_mean = 0.0;
    double prior_variance = 1.0;

    classical::ClassicalModel model() const;
};

struct RunConfig {
    TimeGrid grid;
    std::optional<QuantumSection> quantum;
    EnsembleSection ensemble;
    std::optional<ClassicalSection> classical;

    /// Throws ValidationError (key "model") when no quantum model was given.
    const QuantumSection& require_quantum(const std::string& command) const;
};

RunConfig parse_config_text(const std::string& text);
/// Throws ValidationError if the file cannot be read, ConfigError on schema
/// problems.
RunConfig parse_config(const std::filesystem::path& path);

}  // namespace qfilter::cli
