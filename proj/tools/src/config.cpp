#include "qfilter_cli/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace qfilter::cli {

using nlohmann::json;

namespace {

std::string join_issues(const std::vector<std::pair<std::string, std::string>>& issues) {
    std::string out;
    for (const auto& [key, message] : issues) {
        if (!out.empty()) out += '\n';
        out += key + ": " + message;
    }
    return out;
}

[[noreturn]] void fail(const std::string& key, const std::string& message) { throw ValidationError(message, key); }

std::string child(const std::string& parent, const std::string& name) {
    return parent.empty() ? name : parent + "." + name;
}
std::string child(const std::string& parent, std::size_t index) {
    return parent + "[" + std::to_string(index) + "]";
}

const json& require(const json& object, const std::string& name, const std::string& path) {
    const auto it = object.find(name);
    if (it == object.end()) fail(child(path, name), "required key is missing");
    return *it;
}

void reject_unknown(const json& object, const std::set<std::string>& known, const std::string& path) {
    for (const auto& [name, value] : object.items()) {
        if (!known.count(name)) fail(child(path, name), "unknown key");
    }
}

const json& require_object(const json& value, const std::string& path) {
    if (!value.is_object()) fail(path, "expected an object");
    return value;
}

double as_double(const json& value, const std::string& path) {
    if (!value.is_number()) fail(path, "expected a number");
    const double x = value.get<double>();
    if (!std::isfinite(x)) fail(path, "expected a finite number");
    return x;
}

double as_positive(const json& value, const std::string& path) {
    const double x = as_double(value, path);
    if (!(x > 0.0)) fail(path, "must be positive");
    return x;
}

int as_int(const json& value, const std::string& path, int min) {
    if (!value.is_number_integer()) fail(path, "expected an integer");
    const auto x = value.get<long long>();
    if (x < min || x > std::numeric_limits<int>::max()) fail(path, "must be an integer >= " + std::to_string(min));
    return static_cast<int>(x);
}

std::string as_string(const json& value, const std::string& path) {
    if (!value.is_string()) fail(path, "expected a string");
    return value.get<std::string>();
}

complex as_complex(const json& value, const std::string& path) {
    if (value.is_number()) return {as_double(value, path), 0.0};
    if (value.is_array() && value.size() == 2) {
        return {as_double(value[0], child(path, 0)), as_double(value[1], child(path, 1))};
    }
    fail(path, "expected a number or a [re, im] pair");
}

ComplexMatrix as_matrix(const json& value, int dim, const std::string& path) {
    if (value.is_string()) {
        const auto name = value.get<std::string>();
        if (name == "identity") return identity(dim);
        if (name == "zero") return ComplexMatrix::Zero(dim, dim);
        fail(path, "unknown matrix preset '" + name + "' (use 'identity', 'zero' or explicit rows)");
    }
    if (!value.is_array() || value.size() != static_cast<std::size_t>(dim)) {
        fail(path, "expected " + std::to_string(dim) + " rows");
    }
    ComplexMatrix m(dim, dim);
    for (int r = 0; r < dim; ++r) {
        const json& row = value[r];
        const std::string row_path = child(path, static_cast<std::size_t>(r));
        if (!row.is_array() || row.size() != static_cast<std::size_t>(dim)) {
            fail(row_path, "expected " + std::to_string(dim) + " entries");
        }
        for (int c = 0; c < dim; ++c) m(r, c) = as_complex(row[c], child(row_path, static_cast<std::size_t>(c)));
    }
    return m;
}

HPModel parse_model(const json& value) {
    const std::string path = "model";
    require_object(value, path);
    reject_unknown(value, {"dim", "S", "L", "H"}, path);
    const int dim = as_int(require(value, "dim", path), child(path, "dim"), 1);
    const ComplexMatrix s = as_matrix(require(value, "S", path), dim, child(path, "S"));
    const ComplexMatrix l = as_matrix(require(value, "L", path), dim, child(path, "L"));
    const ComplexMatrix h = as_matrix(require(value, "H", path), dim, child(path, "H"));
    try {
        return HPModel(s, l, h);
    } catch (const ValidationError& e) {
        fail(e.key().empty() ? path : child(path, e.key()), e.what());
    }
}

CoherentInput parse_beta(const json& value) {
    const std::string path = "beta";
    require_object(value, path);
    const std::string kind = as_string(require(value, "kind", path), child(path, "kind"));
    if (kind == "constant") {
        reject_unknown(value, {"kind", "value"}, path);
        return CoherentInput::constant(as_complex(require(value, "value", path), child(path, "value")));
    }
    if (kind == "sinusoid") {
        reject_unknown(value, {"kind", "amplitude", "omega", "offset"}, path);
        const complex offset = value.contains("offset") ? as_complex(value["offset"], child(path, "offset")) : 0.0;
        return CoherentInput::sinusoid(as_complex(require(value, "amplitude", path), child(path, "amplitude")),
                                       as_double(require(value, "omega", path), child(path, "omega")), offset);
    }
    if (kind == "samples") {
        reject_unknown(value, {"kind", "t0", "dt", "values"}, path);
        const double t0 = value.contains("t0") ? as_double(value["t0"], child(path, "t0")) : 0.0;
        const double dt = as_positive(require(value, "dt", path), child(path, "dt"));
        const json& raw = require(value, "values", path);
        if (!raw.is_array() || raw.empty()) fail(child(path, "values"), "expected a nonempty array");
        std::vector<complex> samples;
        for (std::size_t i = 0; i < raw.size(); ++i) samples.push_back(as_complex(raw[i], child(child(path, "values"), i)));
        return CoherentInput::samples(t0, dt, std::move(samples));
    }
    fail(child(path, "kind"), "unknown kind '" + kind + "' (use constant, sinusoid or samples)");
}

DensityMatrix parse_rho0(const json& value, int dim) {
    const std::string path = "rho0";
    if (value.is_string()) {
        const auto name = value.get<std::string>();
        if (name == "mixed") return DensityMatrix::maximally_mixed(dim);
        if (name == "excited" || name == "ground" || name == "plus") {
            if (dim != 2) fail(path, "preset '" + name + "' is defined for dim 2 only");
            if (name == "excited") return DensityMatrix::basis(2, 0);
            if (name == "ground") return DensityMatrix::basis(2, 1);
            ComplexVector psi(2);
            psi << 1.0, 1.0;
            return DensityMatrix::pure(psi / std::sqrt(2.0));
        }
        fail(path, "unknown preset '" + name + "' (use excited, ground, plus, mixed or a matrix)");
    }
    const ComplexMatrix m = as_matrix(value, dim, path);
    try {
        return DensityMatrix(m);
    } catch (const ValidationError& e) {
        fail(path, e.what());
    }
}

TimeGrid parse_grid(const json& value) {
    const std::string path = "grid";
    require_object(value, path);
    reject_unknown(value, {"dt", "T"}, path);
    const double dt = as_positive(require(value, "dt", path), child(path, "dt"));
    const double horizon = as_positive(require(value, "T", path), child(path, "T"));
    if (horizon < dt) fail(child(path, "T"), "must cover at least one step");
    return TimeGrid::over(horizon, dt);
}

std::vector<NamedObservable> parse_observables(const json& value, int dim) {
    const std::string path = "observables";
    if (!value.is_array()) fail(path, "expected an array");
    std::vector<NamedObservable> out;
    for (std::size_t i = 0; i < value.size(); ++i) {
        const json& entry = value[i];
        const std::string entry_path = child(path, i);
        if (entry.is_string()) {
            const auto name = entry.get<std::string>();
            ComplexMatrix m;
            if (name == "sigma_x") m = pauli::sigma_x();
            else if (name == "sigma_y") m = pauli::sigma_y();
            else if (name == "sigma_z") m = pauli::sigma_z();
            else if (name == "P_e") m = pauli::projector_excited();
            else if (name == "P_g") m = pauli::projector_ground();
            else fail(entry_path, "unknown observable '" + name + "' (use sigma_x, sigma_y, sigma_z, P_e, P_g)");
            if (dim != 2) fail(entry_path, "named observable '" + name + "' is defined for dim 2 only");
            out.push_back({name, m});
            continue;
        }
        require_object(entry, entry_path);
        reject_unknown(entry, {"name", "matrix"}, entry_path);
        const std::string name = as_string(require(entry, "name", entry_path), child(entry_path, "name"));
        if (name.empty() || name.find(',') != std::string::npos) {
            fail(child(entry_path, "name"), "must be nonempty and contain no commas");
        }
        const ComplexMatrix m = as_matrix(require(entry, "matrix", entry_path), dim, child(entry_path, "matrix"));
        if (!is_hermitian(m)) fail(child(entry_path, "matrix"), "observable must be Hermitian");
        out.push_back({name, m});
    }
    return out;
}

EnsembleSection parse_ensemble(const json& value) {
    const std::string path = "ensemble";
    require_object(value, path);
    reject_unknown(value, {"trajectories", "threads"}, path);
    EnsembleSection out;
    if (value.contains("trajectories")) out.trajectories = as_int(value["trajectories"], child(path, "trajectories"), 1);
    if (value.contains("threads")) out.threads = as_int(value["threads"], child(path, "threads"), 0);
    return out;
}

ClassicalSection parse_classical(const json& value) {
    const std::string path = "classical";
    require_object(value, path);
    reject_unknown(value, {"preset", "a", "c", "sigma", "particles", "x0", "prior_mean", "prior_variance"}, path);
    ClassicalSection out;
    if (value.contains("preset")) out.preset = as_string(value["preset"], child(path, "preset"));
    if (out.preset == "linear") {
        if (value.contains("a")) out.linear.a = as_double(value["a"], child(path, "a"));
        if (value.contains("c")) out.linear.c = as_double(value["c"], child(path, "c"));
        if (value.contains("sigma")) out.linear.sigma = as_double(value["sigma"], child(path, "sigma"));
    } else if (out.preset == "bistable-double-well") {
        if (value.contains("a")) fail(child(path, "a"), "not a parameter of the double-well preset");
        if (value.contains("c")) out.double_well.c = as_double(value["c"], child(path, "c"));
        if (value.contains("sigma")) out.double_well.sigma = as_double(value["sigma"], child(path, "sigma"));
    } else {
        fail(child(path, "preset"), "unknown preset '" + out.preset + "' (use linear or bistable-double-well)");
    }
    if (value.contains("particles")) out.particles = as_int(value["particles"], child(path, "particles"), 1);
    if (value.contains("x0")) out.x0 = as_double(value["x0"], child(path, "x0"));
    if (value.contains("prior_mean")) out.prior_mean = as_double(value["prior_mean"], child(path, "prior_mean"));
    if (value.contains("prior_variance")) {
        out.prior_variance = as_double(value["prior_variance"], child(path, "prior_variance"));
        if (out.prior_variance < 0.0) fail(child(path, "prior_variance"), "must be nonnegative");
    }
    return out;
}

}  // namespace

ConfigError::ConfigError(std::vector<std::pair<std::string, std::string>> issues)
    : ValidationError(join_issues(issues), issues.empty() ? std::string() : issues.front().first),
      issues_(std::move(issues)) {}

classical::ClassicalModel ClassicalSection::model() const {
    return preset == "linear" ? classical::linear_model(linear) : classical::double_well_model(double_well);
}

const QuantumSection& RunConfig::require_quantum(const std::string& command) const {
    if (!quantum) throw ValidationError("command '" + command + "' needs a quantum model", "model");
    return *quantum;
}

RunConfig parse_config_text(const std::string& text) {
    json root;
    try {
        root = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError({std::pair<std::string, std::string>("(document)", std::string("malformed JSON: ") + e.what())});
    }
    if (!root.is_object()) throw ConfigError({std::pair<std::string, std::string>("(document)", "top level must be an object")});

    std::vector<std::pair<std::string, std::string>> issues;
    auto attempt = [&](auto&& step) {
        try {
            step();
        } catch (const ValidationError& e) {
            issues.emplace_back(e.key().empty() ? "(document)" : e.key(), e.what());
        } catch (const DimensionError& e) {
            issues.emplace_back("(document)", e.what());
        }
    };

    attempt([&] {
        reject_unknown(root, {"model", "beta", "rho0", "grid", "measurement", "observables", "ensemble", "classical"},
                       "");
    });

    RunConfig cfg;
    attempt([&] { cfg.grid = parse_grid(require(root, "grid", "")); });

    if (root.contains("model")) {
        std::optional<HPModel> model;
        std::optional<CoherentInput> beta;
        std::optional<DensityMatrix> rho0;
        std::optional<MeasurementKind> kind;
        std::vector<NamedObservable> observables;
        attempt([&] { model = parse_model(root["model"]); });
        attempt([&] {
            beta = root.contains("beta") ? parse_beta(root["beta"]) : CoherentInput::vacuum();
        });
        attempt([&] {
            kind = root.contains("measurement")
                       ? parse_measurement_kind(as_string(root["measurement"], "measurement"))
                       : MeasurementKind::quadrature;
        });
        if (model) {
            const int dim = model->dim();
            attempt([&] { rho0 = parse_rho0(require(root, "rho0", ""), dim); });
            attempt([&] {
                if (root.contains("observables")) observables = parse_observables(root["observables"], dim);
            });
        }
        if (model && beta && rho0 && kind) {
            cfg.quantum = QuantumSection{*model, *beta, *rho0, *kind, std::move(observables)};
        }
    } else {
        for (const char* key : {"beta", "rho0", "measurement", "observables"}) {
            if (root.contains(key)) issues.emplace_back(key, "given without a model");
        }
    }

    if (root.contains("ensemble")) attempt([&] { cfg.ensemble = parse_ensemble(root["ensemble"]); });
    if (root.contains("classical")) attempt([&] { cfg.classical = parse_classical(root["classical"]); });

    if (!issues.empty()) throw ConfigError(std::move(issues));
    return cfg;
}

RunConfig parse_config(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("cannot read config file '" + path.string() + "'", "config");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_config_text(buffer.str());
}

}  // namespace qfilter::cli
