#include "sincdvr/convergence.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

#include "sincdvr/error.hpp"
#include "parallel.hpp"

namespace sincdvr {

std::vector<std::int64_t> odd_sizes(std::int64_t lo, std::int64_t hi, std::int64_t stride) {
    if (lo < 1 || lo % 2 == 0) throw ConfigError("sizes.min: must be odd and >= 1");
    if (stride < 2 || stride % 2 != 0) throw ConfigError("sizes.stride: must be even and >= 2");
    if (hi < lo) throw ConfigError("sizes.max: must be >= sizes.min");
    std::vector<std::int64_t> out;
    for (std::int64_t d = lo; d <= hi; d += stride) out.push_back(d);
    return out;
}

namespace {

double curve_scale(const CircuitSpec& spec, CurveScale scale) {
    if (scale == CurveScale::Absolute) return 1.0;
    if (spec.family == CircuitFamily::Transmon)
        throw ConfigError("scale: LC scaling needs E_L (not available for the transmon)");
    return std::sqrt(8.0 * spec.E_C * *spec.E_L);
}

}  // namespace

std::vector<ConvergenceCurve> sweep_levels(const CircuitSpec& spec, const Representation& rep,
                                           const std::vector<std::int64_t>& sizes, const std::vector<int>& levels,
                                           SweepOptions opts) {
    check_compatible(spec, rep);
    if (sizes.empty()) throw ConfigError("sweep: empty size list");
    if (levels.empty()) throw ConfigError("sweep: empty level list");
    if (!std::is_sorted(sizes.begin(), sizes.end()) ||
        std::adjacent_find(sizes.begin(), sizes.end()) != sizes.end())
        throw ConfigError("sweep: sizes must be strictly ascending");
    for (auto d : sizes) check_dimension(rep, d);
    const int top = *std::max_element(levels.begin(), levels.end());
    if (*std::min_element(levels.begin(), levels.end()) < 0) throw ConfigError("sweep: levels must be >= 0");
    if (top >= sizes.front()) throw ConfigError("sweep: every level must be below the smallest matrix size");

    const double scale = curve_scale(spec, opts.scale);
    std::vector<double> refs;
    for (int l : levels) refs.push_back(reference_energy(spec, l));

    std::vector<RVector> energies(sizes.size());
    detail::parallel_for(sizes.size(), opts.threads, [&](std::size_t i) {
        const OperatorMatrix h = assemble(spec, rep, sizes[i]);
        energies[i] = eigensolve(h, top + 1, false).energies;
    });

    std::vector<ConvergenceCurve> out;
    for (std::size_t l = 0; l < levels.size(); ++l) {
        ConvergenceCurve c;
        c.level = levels[l];
        c.scale = opts.scale;
        c.sizes = sizes;
        for (std::size_t i = 0; i < sizes.size(); ++i) c.deltas.push_back((energies[i](levels[l]) - refs[l]) / scale);
        out.push_back(std::move(c));
    }
    return out;
}

ConvergenceCurve sweep(const CircuitSpec& spec, const Representation& rep, const std::vector<std::int64_t>& sizes,
                       int level, SweepOptions opts) {
    return std::move(sweep_levels(spec, rep, sizes, {level}, opts).front());
}

double default_threshold(const CircuitSpec& spec, CurveScale scale) {
    return kDecoherenceThresholdGHz / curve_scale(spec, scale);
}

std::optional<std::int64_t> decoherence_R(const ConvergenceCurve& curve, double threshold) {
    if (!(threshold > 0.0)) throw ConfigError("threshold: must be > 0");
    for (std::size_t i = 0; i < curve.sizes.size(); ++i)
        if (std::abs(curve.deltas[i]) < threshold) return curve.sizes[i];
    return std::nullopt;
}

Saturation saturation_P(const ConvergenceCurve& curve, const PlateauRule& rule) {
    const auto n = curve.deltas.size();
    if (n < 5) throw ConfigError("saturation_P: curve needs at least 5 points");
    if (rule.window < 1 || static_cast<std::size_t>(rule.window) > n) throw ConfigError("saturation_P: bad window");

    std::vector<double> w;
    for (std::size_t i = n - static_cast<std::size_t>(rule.window); i < n; ++i) w.push_back(std::abs(curve.deltas[i]));
    const auto [lo, hi] = std::minmax_element(w.begin(), w.end());
    const double final_delta = curve.deltas.back();

    Saturation s;
    const bool at_floor = *hi <= rule.floor;
    if (!at_floor) s.sign = final_delta > 0.0 ? 1 : (final_delta < 0.0 ? -1 : 0);
    const bool in_band = *lo > rule.floor && *hi / *lo < rule.band;
    s.saturated = at_floor || in_band;
    if (s.saturated) {
        std::sort(w.begin(), w.end());
        s.P = w.size() % 2 == 1 ? w[w.size() / 2] : 0.5 * (w[w.size() / 2 - 1] + w[w.size() / 2]);
    } else {
        s.P = std::abs(final_delta);
    }
    return s;
}

bool crossed_zero(const ConvergenceCurve& curve, double floor) {
    int last = 0;
    for (double d : curve.deltas) {
        if (std::abs(d) <= floor) continue;
        const int s = d > 0.0 ? 1 : -1;
        if (last != 0 && s != last) return true;
        last = s;
    }
    return false;
}

MetricsRecord compute_metrics(const ConvergenceCurve& curve, double threshold, const PlateauRule& rule) {
    MetricsRecord m;
    m.R = decoherence_R(curve, threshold);
    const Saturation s = saturation_P(curve, rule);
    m.P = s.P;
    m.P_sign = s.sign;
    m.saturated = s.saturated;
    m.crossed_zero = crossed_zero(curve, rule.floor);
    m.threshold = threshold;
    m.plateau = rule;
    return m;
}

PlateauRule plateau_for(const CircuitSpec& spec, CurveScale scale) {
    PlateauRule r;
    r.floor = 1e-12 / curve_scale(spec, scale);
    return r;
}

std::string format_number(double v) {
    char buf[32];
    for (int prec = 15; prec <= 17; ++prec) {
        std::snprintf(buf, sizeof buf, "%.*g", prec, v);
        if (std::strtod(buf, nullptr) == v) break;
    }
    return buf;
}

void write_curve_csv(std::ostream& os, const ConvergenceCurve& curve) {
    os << "size,delta,abs_delta,sign\n";
    for (std::size_t i = 0; i < curve.sizes.size(); ++i) {
        const double d = curve.deltas[i];
        os << curve.sizes[i] << ',' << format_number(d) << ',' << format_number(std::abs(d)) << ','
           << (d > 0.0 ? 1 : (d < 0.0 ? -1 : 0)) << '\n';
    }
}

void write_metrics_csv(std::ostream& os, const std::vector<MetricsRow>& rows) {
    os << kMetricsCsvHeader << '\n';
    for (const auto& r : rows) {
        os << r.circuit << ',' << r.rep_kind << ',';
        if (r.spacing)
            os << r.spacing->num << ',' << r.spacing->den << ',' << (r.spacing->pi ? "true" : "false");
        else
            os << ",,";
        os << ',' << r.level << ',';
        if (r.metrics.R) os << *r.metrics.R;
        os << ',' << format_number(r.metrics.P) << ',' << r.metrics.P_sign << ','
           << (r.metrics.saturated ? "true" : "false") << ',' << (r.metrics.crossed_zero ? "true" : "false") << '\n';
    }
}

}  // namespace sincdvr
