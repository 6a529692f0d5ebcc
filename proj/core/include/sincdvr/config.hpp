#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "sincdvr/circuits.hpp"
#include "sincdvr/convergence.hpp"
#include "sincdvr/spectra.hpp"
#include "sincdvr/states.hpp"

namespace sincdvr {

/// A representation plus the matrix sizes it is swept over (defaults to the run's sizes).
struct RepresentationEntry {
    Representation rep;
    std::optional<std::vector<std::int64_t>> sizes;
};

/// Eigenstate decompositions at one fixed matrix size.
struct DecomposeConfig {
    std::vector<Representation> representations;
    Eigen::Index size = 81;
    int levels = 8;
    double floor = 1e-25;
};

/// Higher-level metrics (one row per level per representation).
struct LevelStudyConfig {
    std::vector<Representation> representations;  ///< empty: reuse the run's representations
    std::vector<int> levels = {0, 1, 2, 3, 4};
};

struct RunConfig {
    CircuitSpec circuit = CircuitSpec::lc(1.0, 1.0);
    std::vector<RepresentationEntry> representations;
    std::vector<std::int64_t> sizes = odd_sizes(3, 301, 2);
    std::vector<int> levels = {0};
    double threshold_GHz = kDecoherenceThresholdGHz;
    CurveScale scale = CurveScale::Absolute;
    unsigned threads = 1;
    bool plot_script = false;
    std::optional<LevelStudyConfig> level_study;
    std::optional<DecomposeConfig> decompose;
    std::optional<FluxSweepConfig> shift;

    /// Sizes for entry i: its override or the run's default.
    [[nodiscard]] const std::vector<std::int64_t>& sizes_for(std::size_t i) const;
    /// Threshold in the curve's units (GHz, or divided by sqrt(8 E_C E_L)).
    [[nodiscard]] double curve_threshold() const;

    /// Throws ConfigError naming the offending field; checks every representation
    /// against the circuit before any computation.
    void validate() const;
};

/// Parses and validates a run configuration. Unknown fields are rejected.
///
///   circuit          {"family": "LC" | "Fluxonium" | "Transmon", "E_C", "E_L", "E_J", "A", "N_g"}
///   representations  [{"type": ..., "sizes"?: sizes}, ...]
///   sizes            {"min", "max", "stride"?} or [d, ...]
///   levels           [n, ...]
///   threshold_GHz    number
///   scale            "absolute" | "lc_scaled"
///   threads          integer >= 0
///   plot_script      bool
///   level_study      {"representations"?: [...], "levels"?: [...]}
///   decompose        {"representations": [...], "size", "levels", "floor"}
///   shift            {"kind", "spacing", "dim", "betas", "direction", "flux_steps", "mode"}
[[nodiscard]] RunConfig parse_run_config(const nlohmann::json& j);
[[nodiscard]] RunConfig load_run_config(const std::string& path);

[[nodiscard]] nlohmann::json run_config_to_json(const RunConfig& cfg);

/// Shipped presets: "lc", "fluxonium", "transmon-tl", "transmon-cl".
[[nodiscard]] RunConfig preset(std::string_view name);
[[nodiscard]] std::vector<std::string> preset_names();

/// Grid lists used by the presets.
[[nodiscard]] std::vector<Spacing> lc_charge_grids();
[[nodiscard]] std::vector<Spacing> phase_grids();
[[nodiscard]] std::vector<Spacing> fluxonium_charge_grids();
[[nodiscard]] std::vector<Spacing> fd_grids();

}  // namespace sincdvr
