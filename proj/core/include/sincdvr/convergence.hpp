#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "sincdvr/circuits.hpp"
#include "sincdvr/spectra.hpp"

namespace sincdvr {

enum class CurveScale { Absolute, LcScaled };

/// Signed energy error Delta_n = E_rep - E_ref of one level against matrix size.
/// LcScaled curves are divided by sqrt(8 E_C E_L).
struct ConvergenceCurve {
    int level = 0;
    std::vector<std::int64_t> sizes;
    std::vector<double> deltas;
    CurveScale scale = CurveScale::Absolute;
};

/// Odd sizes lo, lo+stride, ..., <= hi (stride must be even).
[[nodiscard]] std::vector<std::int64_t> odd_sizes(std::int64_t lo, std::int64_t hi, std::int64_t stride = 2);

/// Number of worker threads for sweeps; 0 means hardware concurrency.
struct SweepOptions {
    CurveScale scale = CurveScale::Absolute;
    unsigned threads = 1;
};

/// One curve per requested level, sharing a single eigensolve per size.
[[nodiscard]] std::vector<ConvergenceCurve> sweep_levels(const CircuitSpec& spec, const Representation& rep,
                                                         const std::vector<std::int64_t>& sizes,
                                                         const std::vector<int>& levels, SweepOptions opts = {});

[[nodiscard]] ConvergenceCurve sweep(const CircuitSpec& spec, const Representation& rep,
                                     const std::vector<std::int64_t>& sizes, int level, SweepOptions opts = {});

/// Decoherence accuracy, 1e-6 GHz.
inline constexpr double kDecoherenceThresholdGHz = 1e-6;

/// Threshold in the units of the curve: 1e-6 GHz, or 1e-6/sqrt(8 E_C E_L) for LcScaled.
[[nodiscard]] double default_threshold(const CircuitSpec& spec, CurveScale scale);

/// First sampled size with |Delta| < threshold (a transient dip counts).
[[nodiscard]] std::optional<std::int64_t> decoherence_R(const ConvergenceCurve& curve, double threshold);

/// Plateau detector for the saturation precision. A curve is saturated when the
/// last `window` values of |Delta| lie within a factor `band` of each other
/// above `floor`, or all sit at or below `floor`.
struct PlateauRule {
    int window = 3;
    double band = 1.1;
    double floor = 1e-12;  ///< in curve units
};

struct Saturation {
    double P = 0.0;       ///< median of the window when saturated, else the final |Delta|
    int sign = 0;         ///< sign of Delta at the final size; 0 when the window sits at the floor
    bool saturated = false;
};

[[nodiscard]] Saturation saturation_P(const ConvergenceCurve& curve, const PlateauRule& rule = {});

/// True if Delta changes sign anywhere along the curve. Points with |Delta| <= floor
/// carry no resolvable sign and are skipped.
[[nodiscard]] bool crossed_zero(const ConvergenceCurve& curve, double floor = 0.0);

struct MetricsRecord {
    std::optional<std::int64_t> R;
    double P = 0.0;
    int P_sign = 0;
    bool saturated = false;
    bool crossed_zero = false;
    double threshold = kDecoherenceThresholdGHz;
    PlateauRule plateau;
};

[[nodiscard]] MetricsRecord compute_metrics(const ConvergenceCurve& curve, double threshold,
                                            const PlateauRule& rule = {});

/// Plateau rule with the 1e-12 GHz floor converted to the curve's units.
[[nodiscard]] PlateauRule plateau_for(const CircuitSpec& spec, CurveScale scale);

/// Shortest round-trip decimal rendering, used for every CSV number.
[[nodiscard]] std::string format_number(double v);

/// CSV: size,delta,abs_delta,sign
void write_curve_csv(std::ostream& os, const ConvergenceCurve& curve);

struct MetricsRow {
    std::string circuit;
    std::string rep_kind;
    std::optional<Spacing> spacing;
    int level = 0;
    MetricsRecord metrics;
};

inline constexpr const char* kMetricsCsvHeader =
    "circuit,rep_kind,spacing_num,spacing_den,spacing_pi,level,R,P,P_sign,saturated,crossed_zero";

/// CSV with kMetricsCsvHeader; absent R and spacings are empty fields.
void write_metrics_csv(std::ostream& os, const std::vector<MetricsRow>& rows);

}  // namespace sincdvr
