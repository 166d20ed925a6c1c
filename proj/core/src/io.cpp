#include "qfilter/io.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <system_error>

namespace qfilter {

std::string format_double(double value) {
    char buffer[32];
    const auto result = std::to_chars(buffer, buffer + sizeof buffer, value);
    return std::string(buffer, result.ptr);
}

double parse_double(const std::string& text, const std::string& key) {
    double value = 0.0;
    const char* first = text.data();
    const char* last = first + text.size();
    const auto result = std::from_chars(first, last, value);
    if (result.ec != std::errc() || result.ptr != last) {
        throw ValidationError("'" + text + "' is not a number", key);
    }
    return value;
}

void write_record(std::ostream& out, const MeasurementRecord& record) {
    record.validate();
    if (record.grid.t0 != 0.0) throw ValidationError("record files assume a grid starting at t = 0", "record.t0");
    out << "kind,dt,steps\n"
        << to_string(record.kind) << ',' << format_double(record.grid.dt) << ',' << record.grid.steps << '\n';
    for (double dy : record.increments) out << format_double(dy) << '\n';
}

namespace {

std::vector<std::string> split(const std::string& line, char sep) {
    std::vector<std::string> out;
    std::string field;
    std::istringstream stream(line);
    while (std::getline(stream, field, sep)) out.push_back(field);
    if (!line.empty() && line.back() == sep) out.emplace_back();
    return out;
}

bool next_line(std::istream& in, std::string& line) {
    if (!std::getline(in, line)) return false;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return true;
}

}  // namespace

MeasurementRecord read_record(std::istream& in) {
    std::string line;
    if (!next_line(in, line) || line != "kind,dt,steps") {
        throw ValidationError("record must start with the header 'kind,dt,steps'", "record");
    }
    if (!next_line(in, line)) throw ValidationError("record metadata line is missing", "record");
    const auto fields = split(line, ',');
    if (fields.size() != 3) throw ValidationError("record metadata needs 3 fields", "record");

    MeasurementRecord record;
    record.kind = parse_measurement_kind(fields[0]);
    record.grid.dt = parse_double(fields[1], "record.dt");
    const double steps = parse_double(fields[2], "record.steps");
    if (steps != static_cast<double>(static_cast<int>(steps))) {
        throw ValidationError("step count must be an integer", "record.steps");
    }
    record.grid.steps = static_cast<int>(steps);

    while (next_line(in, line)) {
        if (line.empty()) continue;
        record.increments.push_back(parse_double(line, "record.increments"));
    }
    record.validate();
    return record;
}

MeasurementRecord read_record_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open record file '" + path.string() + "'", "record");
    return read_record(in);
}

void write_state_csv(std::ostream& out, const TimeGrid& grid, const std::vector<ComplexMatrix>& states,
                     const std::vector<NamedObservable>& observables, const std::vector<double>& innovations) {
    if (states.size() != static_cast<std::size_t>(grid.steps) + 1) {
        throw DimensionError("state list does not match the grid");
    }
    const bool with_innovations = !innovations.empty();
    if (with_innovations && innovations.size() != states.size()) {
        throw DimensionError("innovations path does not match the state list");
    }
    out << 't';
    for (const auto& obs : observables) out << ',' << obs.name;
    out << ",trace,purity";
    if (with_innovations) out << ",innovation";
    out << '\n';
    for (std::size_t k = 0; k < states.size(); ++k) {
        const ComplexMatrix& rho = states[k];
        out << format_double(grid.time(static_cast<int>(k)));
        for (const auto& obs : observables) out << ',' << format_double(expectation(rho, obs.matrix).real());
        out << ',' << format_double(rho.trace().real()) << ',' << format_double(expectation(rho, rho).real());
        if (with_innovations) out << ',' << format_double(innovations[k]);
        out << '\n';
    }
}

void write_ensemble_csv(std::ostream& out, const EnsembleReport& report) {
    const bool with_distance = !report.trace_distance.empty();
    out << 't';
    for (const auto& name : report.observable_names) out << ',' << name << "_mean," << name << "_stderr";
    out << ",innovation_mean,innovation_stderr,record_mean,record_stderr";
    if (with_distance) out << ",trace_distance";
    out << '\n';
    for (std::size_t k = 0; k < report.mean_states.size(); ++k) {
        out << format_double(report.grid.time(static_cast<int>(k)));
        for (std::size_t o = 0; o < report.observable_names.size(); ++o) {
            out << ',' << format_double(report.observable_mean[o][k]) << ','
                << format_double(report.observable_stderr[o][k]);
        }
        out << ',' << format_double(report.innovation_mean[k]) << ',' << format_double(report.innovation_stderr[k])
            << ',' << format_double(report.record_mean[k]) << ',' << format_double(report.record_stderr[k]);
        if (with_distance) out << ',' << format_double(report.trace_distance[k]);
        out << '\n';
    }
}

void write_file_atomically(const std::filesystem::path& path, const std::string& content) {
    std::filesystem::path tmp = path;
    tmp += ".partial";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::filesystem::filesystem_error("cannot write", tmp, std::make_error_code(std::errc::io_error));
        out << content;
        if (!out.flush()) {
            throw std::filesystem::filesystem_error("failed writing", tmp, std::make_error_code(std::errc::io_error));
        }
    }
    std::filesystem::rename(tmp, path);
}

}  // namespace qfilter
