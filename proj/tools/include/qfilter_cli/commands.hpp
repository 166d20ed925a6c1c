#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

namespace qfilter::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 1;
inline constexpr int kExitNumerical = 2;

struct CommandOptions {
    std::optional<std::filesystem::path> config;
    std::uint64_t seed = 0;
    std::filesystem::path out = ".";
    std::optional<int> trajectories;
    bool dims_check = false;
    /// Record consumed by `filter`; defaults to <out>/record.csv.
    std::optional<std::filesystem::path> record;
};

/// Runs one of master, simulate, filter, ensemble, classical, verify and
/// returns the exit code: 0 success, 1 validation error, 2 numerical failure.
/// Diagnostics go to `err`, summaries to `out`. Outputs are computed in full
/// before any file is written.
int dispatch(const std::string& command, const CommandOptions& options, std::ostream& out, std::ostream& err);

/// Column reference printed by --help.
std::string output_formats_help();

}  // namespace qfilter::cli
