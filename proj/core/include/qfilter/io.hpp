#pragma once

// CSV formats. Doubles are written in shortest round-trip form, so a value
// read back is bit-identical to the one written. LF line endings.
//
// Record file:
//     kind,dt,steps
//     quadrature,0.001,1000
//     <one increment per line>
//
// Record grids start at t = 0.
//
// State file (filter or master):
//     t,<observable names...>,trace,purity[,innovation]

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "qfilter/ensemble.hpp"
#include "qfilter/trajectory.hpp"

namespace qfilter {

std::string format_double(double value);
/// Throws ValidationError naming `key` unless the whole of `text` is a number.
double parse_double(const std::string& text, const std::string& key);

void write_record(std::ostream& out, const MeasurementRecord& record);
/// Throws ValidationError (key "record") on any format problem.
MeasurementRecord read_record(std::istream& in);
MeasurementRecord read_record_file(const std::filesystem::path& path);

/// `innovations`, when non-empty, is the cumulative path (one entry per state).
void write_state_csv(std::ostream& out, const TimeGrid& grid, const std::vector<ComplexMatrix>& states,
                     const std::vector<NamedObservable>& observables,
                     const std::vector<double>& innovations = {});

/// t, then <name>_mean,<name>_stderr per observable, innovation_mean,
/// innovation_stderr, record_mean, record_stderr[, trace_distance].
void write_ensemble_csv(std::ostream& out, const EnsembleReport& report);

/// Writes `content` to `path` through a temporary file and a rename, so a
/// failed run never leaves a partial file behind.
void write_file_atomically(const std::filesystem::path& path, const std::string& content);

}  // namespace qfilter
