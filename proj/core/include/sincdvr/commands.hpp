#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "sincdvr/config.hpp"

namespace sincdvr {

struct CommandOptions {
    std::filesystem::path out_dir = ".";
    std::optional<unsigned> threads;  ///< overrides the config's worker count
    bool plot_script = false;         ///< also emit a gnuplot script (or set plot_script in the config)
};

struct CommandReport {
    std::vector<std::filesystem::path> files;  ///< data files, in emission order (manifest excluded)
    double wall_seconds = 0.0;
};

/// One curve CSV per (representation, level): curves/curve_<i>_<label>_L<level>.csv
CommandReport cmd_curve(const RunConfig& cfg, const CommandOptions& opts);
/// metrics.csv with one row per (representation, level).
CommandReport cmd_metrics(const RunConfig& cfg, const CommandOptions& opts);
/// levels.csv with the level study's levels for each of its representations.
CommandReport cmd_levels(const RunConfig& cfg, const CommandOptions& opts);
/// decompose/decompose_<i>_<label>.csv for each decomposition representation.
CommandReport cmd_decompose(const RunConfig& cfg, const CommandOptions& opts);
/// shift_sweep.csv (energy and current against flux) and shift_coefficients.csv.
CommandReport cmd_shift(const RunConfig& cfg, const CommandOptions& opts);

/// Dispatches on "curve", "metrics", "levels", "decompose" or "shift".
CommandReport run_command(std::string_view command, const RunConfig& cfg, const CommandOptions& opts);

/// FNV-1a 64-bit hash of the canonical (sorted-key, compact) config JSON, as 16 hex digits.
[[nodiscard]] std::string config_hash(const RunConfig& cfg);

/// File-name-safe label of a representation, e.g. "TraditionalPhase_dtheta_5pi_32".
[[nodiscard]] std::string file_label(const Representation& rep);

[[nodiscard]] std::string_view library_version() noexcept;

/// Metrics of every (representation, level) pair of the run, ordered by representation then level.
[[nodiscard]] std::vector<MetricsRow> run_metrics(const RunConfig& cfg, const std::vector<Representation>& reps,
                                                  const std::vector<std::vector<std::int64_t>>& sizes,
                                                  const std::vector<int>& levels, unsigned threads);

}  // namespace sincdvr
