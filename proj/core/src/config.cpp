#include "sincdvr/config.hpp"

#include <algorithm>
#include <fstream>
#include <set>

#include "sincdvr/error.hpp"

namespace sincdvr {

namespace {

using nlohmann::json;

void allow_only(const json& j, const std::string& where, std::initializer_list<std::string_view> keys) {
    if (!j.is_object()) throw ConfigError(where + ": expected an object");
    for (const auto& [key, value] : j.items())
        if (std::find(keys.begin(), keys.end(), key) == keys.end())
            throw ConfigError(where + (where.empty() ? "" : ".") + key + ": unknown field");
}

std::int64_t get_int(const json& j, const std::string& field) {
    if (!j.is_number_integer()) throw ConfigError(field + ": expected an integer");
    return j.get<std::int64_t>();
}

double get_number(const json& j, const std::string& field) {
    if (!j.is_number()) throw ConfigError(field + ": expected a number");
    return j.get<double>();
}

bool get_bool(const json& j, const std::string& field) {
    if (!j.is_boolean()) throw ConfigError(field + ": expected true or false");
    return j.get<bool>();
}

std::string get_string(const json& j, const std::string& field) {
    if (!j.is_string()) throw ConfigError(field + ": expected a string");
    return j.get<std::string>();
}

// Re-labels errors from nested parsers with the field path.
template <class F>
auto at_field(const std::string& field, F&& f) -> decltype(f()) {
    try {
        return f();
    } catch (const ConfigError& e) {
        throw ConfigError(field + ": " + e.what());
    } catch (const json::exception& e) {
        throw ConfigError(field + ": " + e.what());
    }
}

std::vector<std::int64_t> parse_sizes(const json& j, const std::string& field) {
    std::vector<std::int64_t> out;
    if (j.is_array()) {
        for (std::size_t i = 0; i < j.size(); ++i) out.push_back(get_int(j[i], field + "[" + std::to_string(i) + "]"));
        if (out.empty()) throw ConfigError(field + ": must not be empty");
        for (std::size_t i = 1; i < out.size(); ++i)
            if (out[i] <= out[i - 1]) throw ConfigError(field + ": must be strictly ascending");
        if (out.front() < 1) throw ConfigError(field + ": sizes must be >= 1");
        return out;
    }
    allow_only(j, field, {"min", "max", "stride"});
    if (!j.contains("min") || !j.contains("max")) throw ConfigError(field + ": range needs \"min\" and \"max\"");
    const auto lo = get_int(j["min"], field + ".min");
    const auto hi = get_int(j["max"], field + ".max");
    const auto stride = j.contains("stride") ? get_int(j["stride"], field + ".stride") : 2;
    return at_field(field, [&] { return odd_sizes(lo, hi, stride); });
}

std::vector<int> parse_levels(const json& j, const std::string& field) {
    if (!j.is_array() || j.empty()) throw ConfigError(field + ": expected a non-empty array of integers");
    std::vector<int> out;
    for (std::size_t i = 0; i < j.size(); ++i) {
        const auto v = get_int(j[i], field + "[" + std::to_string(i) + "]");
        if (v < 0 || v > 100000) throw ConfigError(field + "[" + std::to_string(i) + "]: must be >= 0");
        out.push_back(static_cast<int>(v));
    }
    if (std::set<int>(out.begin(), out.end()).size() != out.size()) throw ConfigError(field + ": duplicate level");
    return out;
}

std::vector<Representation> parse_rep_list(const json& j, const std::string& field) {
    if (!j.is_array()) throw ConfigError(field + ": expected an array");
    std::vector<Representation> out;
    for (std::size_t i = 0; i < j.size(); ++i) {
        const std::string f = field + "[" + std::to_string(i) + "]";
        out.push_back(at_field(f, [&] { return representation_from_json(j[i]); }));
    }
    return out;
}

CurveScale parse_scale(const std::string& s) {
    if (s == "absolute") return CurveScale::Absolute;
    if (s == "lc_scaled") return CurveScale::LcScaled;
    throw ConfigError("scale: expected \"absolute\" or \"lc_scaled\"");
}

std::string_view scale_name(CurveScale s) { return s == CurveScale::Absolute ? "absolute" : "lc_scaled"; }

FluxSweepConfig parse_shift(const json& j, const CircuitSpec& circuit) {
    allow_only(j, "shift", {"kind", "spacing", "dim", "betas", "direction", "flux_steps", "mode"});
    FluxSweepConfig c;
    c.circuit = circuit;
    if (j.contains("kind")) c.kind = at_field("shift.kind", [&] { return parse_dvr_kind(get_string(j["kind"], "shift.kind")); });
    if (j.contains("spacing")) c.spacing = at_field("shift.spacing", [&] { return j["spacing"].get<Spacing>(); });
    if (j.contains("dim")) c.dim = get_int(j["dim"], "shift.dim");
    if (j.contains("betas")) {
        const json& b = j["betas"];
        if (!b.is_array() || b.empty()) throw ConfigError("shift.betas: expected a non-empty array of integers");
        c.betas.clear();
        for (std::size_t i = 0; i < b.size(); ++i) c.betas.push_back(get_int(b[i], "shift.betas[" + std::to_string(i) + "]"));
    }
    if (j.contains("direction")) {
        const auto d = get_string(j["direction"], "shift.direction");
        if (d == "plus") c.direction = ShiftDirection::Plus;
        else if (d == "minus") c.direction = ShiftDirection::Minus;
        else throw ConfigError("shift.direction: expected \"plus\" or \"minus\"");
    }
    if (j.contains("flux_steps")) c.flux_steps = static_cast<int>(get_int(j["flux_steps"], "shift.flux_steps"));
    if (j.contains("mode")) {
        const auto m = get_string(j["mode"], "shift.mode");
        if (m == "fixed_state") c.mode = SweepStateMode::FixedState;
        else if (m == "rediagonalize") c.mode = SweepStateMode::Rediagonalize;
        else throw ConfigError("shift.mode: expected \"fixed_state\" or \"rediagonalize\"");
    }
    return c;
}

}  // namespace

const std::vector<std::int64_t>& RunConfig::sizes_for(std::size_t i) const {
    const auto& e = representations.at(i);
    return e.sizes ? *e.sizes : sizes;
}

double RunConfig::curve_threshold() const {
    return threshold_GHz * default_threshold(circuit, scale) / kDecoherenceThresholdGHz;
}

void RunConfig::validate() const {
    at_field("circuit", [&] { circuit.validate(); });
    if (representations.empty()) throw ConfigError("representations: at least one representation is required");
    if (!(threshold_GHz > 0.0)) throw ConfigError("threshold_GHz: must be > 0");
    if (scale == CurveScale::LcScaled && !circuit.E_L)
        throw ConfigError("scale: \"lc_scaled\" needs a circuit with E_L");
    if (levels.empty()) throw ConfigError("levels: must not be empty");
    const int top = *std::max_element(levels.begin(), levels.end());
    for (std::size_t i = 0; i < representations.size(); ++i) {
        const std::string f = "representations[" + std::to_string(i) + "]";
        const auto& rep = representations[i].rep;
        at_field(f, [&] { check_compatible(circuit, rep); });
        const auto& s = sizes_for(i);
        if (s.size() < 5) throw ConfigError(f + ".sizes: need at least 5 sizes for the saturation metric");
        for (auto d : s) at_field(f + ".sizes", [&] { check_dimension(rep, d); });
        if (top >= s.front()) throw ConfigError(f + ".sizes: smallest size must exceed every requested level");
    }
    if (level_study) {
        for (std::size_t i = 0; i < level_study->representations.size(); ++i)
            at_field("level_study.representations[" + std::to_string(i) + "]",
                     [&] { check_compatible(circuit, level_study->representations[i]); });
        if (level_study->levels.empty()) throw ConfigError("level_study.levels: must not be empty");
        const int lt = *std::max_element(level_study->levels.begin(), level_study->levels.end());
        if (std::count_if(sizes.begin(), sizes.end(), [lt](std::int64_t d) { return d > lt; }) < 5)
            throw ConfigError("level_study.levels: fewer than 5 sizes exceed the highest level");
    }
    if (decompose) {
        if (decompose->representations.empty())
            throw ConfigError("decompose.representations: at least one representation is required");
        for (std::size_t i = 0; i < decompose->representations.size(); ++i) {
            const std::string f = "decompose.representations[" + std::to_string(i) + "]";
            at_field(f, [&] {
                check_compatible(circuit, decompose->representations[i]);
                check_dimension(decompose->representations[i], decompose->size);
            });
        }
        if (decompose->levels < 1 || decompose->levels > decompose->size)
            throw ConfigError("decompose.levels: must be in [1, size]");
        if (!(decompose->floor >= 0.0)) throw ConfigError("decompose.floor: must be >= 0");
    }
    if (shift) {
        if (circuit.family != CircuitFamily::Fluxonium) throw ConfigError("shift: flux sweeps need a fluxonium circuit");
        if (!is_phase(shift->kind)) throw ConfigError("shift.kind: must be a phase DVR");
        if (shift->dim < 3 || shift->dim % 2 == 0) throw ConfigError("shift.dim: must be odd and >= 3");
        if (!shift->spacing.pi) throw ConfigError("shift.spacing: phase grids are multiples of pi");
        if (shift->flux_steps < 1) throw ConfigError("shift.flux_steps: must be >= 1");
        for (auto b : shift->betas)
            if (b < 0) throw ConfigError("shift.betas: must be >= 0");
    }
}

RunConfig parse_run_config(const json& j) {
    allow_only(j, "", {"circuit", "representations", "sizes", "levels", "threshold_GHz", "scale", "threads",
                       "plot_script", "level_study", "decompose", "shift"});
    RunConfig c;
    if (!j.contains("circuit")) throw ConfigError("circuit: required");
    c.circuit = at_field("circuit", [&] { return j["circuit"].get<CircuitSpec>(); });
    if (j.contains("sizes")) c.sizes = parse_sizes(j["sizes"], "sizes");
    if (j.contains("levels")) c.levels = parse_levels(j["levels"], "levels");
    if (j.contains("threshold_GHz")) c.threshold_GHz = get_number(j["threshold_GHz"], "threshold_GHz");
    if (j.contains("scale")) c.scale = parse_scale(get_string(j["scale"], "scale"));
    if (j.contains("threads")) {
        const auto t = get_int(j["threads"], "threads");
        if (t < 0 || t > 1024) throw ConfigError("threads: must be in [0, 1024]");
        c.threads = static_cast<unsigned>(t);
    }
    if (j.contains("plot_script")) c.plot_script = get_bool(j["plot_script"], "plot_script");

    if (!j.contains("representations") || !j["representations"].is_array())
        throw ConfigError("representations: required array");
    const json& reps = j["representations"];
    for (std::size_t i = 0; i < reps.size(); ++i) {
        const std::string f = "representations[" + std::to_string(i) + "]";
        if (!reps[i].is_object()) throw ConfigError(f + ": expected an object");
        json body = reps[i];
        RepresentationEntry e;
        if (body.contains("sizes")) {
            e.sizes = parse_sizes(body["sizes"], f + ".sizes");
            body.erase("sizes");
        }
        e.rep = at_field(f, [&] { return representation_from_json(body); });
        c.representations.push_back(std::move(e));
    }

    if (j.contains("level_study")) {
        const json& ls = j["level_study"];
        allow_only(ls, "level_study", {"representations", "levels"});
        LevelStudyConfig l;
        if (ls.contains("representations"))
            l.representations = parse_rep_list(ls["representations"], "level_study.representations");
        if (ls.contains("levels")) l.levels = parse_levels(ls["levels"], "level_study.levels");
        c.level_study = std::move(l);
    }
    if (j.contains("decompose")) {
        const json& dj = j["decompose"];
        allow_only(dj, "decompose", {"representations", "size", "levels", "floor"});
        DecomposeConfig d;
        if (dj.contains("representations"))
            d.representations = parse_rep_list(dj["representations"], "decompose.representations");
        if (dj.contains("size")) d.size = get_int(dj["size"], "decompose.size");
        if (dj.contains("levels")) d.levels = static_cast<int>(get_int(dj["levels"], "decompose.levels"));
        if (dj.contains("floor")) d.floor = get_number(dj["floor"], "decompose.floor");
        c.decompose = std::move(d);
    }
    if (j.contains("shift")) c.shift = parse_shift(j["shift"], c.circuit);

    c.validate();
    return c;
}

RunConfig load_run_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("--config: cannot open '" + path + "'");
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError("--config: invalid JSON in '" + path + "': " + e.what());
    }
    return parse_run_config(j);
}

json run_config_to_json(const RunConfig& cfg) {
    json j;
    j["circuit"] = cfg.circuit;
    j["representations"] = json::array();
    for (const auto& e : cfg.representations) {
        json r = e.rep;
        if (e.sizes) r["sizes"] = *e.sizes;
        j["representations"].push_back(std::move(r));
    }
    j["sizes"] = cfg.sizes;
    j["levels"] = cfg.levels;
    j["threshold_GHz"] = cfg.threshold_GHz;
    j["scale"] = scale_name(cfg.scale);
    j["threads"] = cfg.threads;
    j["plot_script"] = cfg.plot_script;
    if (cfg.level_study) {
        json ls;
        ls["representations"] = json::array();
        for (const auto& r : cfg.level_study->representations) ls["representations"].push_back(json(r));
        ls["levels"] = cfg.level_study->levels;
        j["level_study"] = std::move(ls);
    }
    if (cfg.decompose) {
        json d;
        d["representations"] = json::array();
        for (const auto& r : cfg.decompose->representations) d["representations"].push_back(json(r));
        d["size"] = cfg.decompose->size;
        d["levels"] = cfg.decompose->levels;
        d["floor"] = cfg.decompose->floor;
        j["decompose"] = std::move(d);
    }
    if (cfg.shift) {
        const auto& s = *cfg.shift;
        j["shift"] = {{"kind", std::string(to_string(s.kind))},
                      {"spacing", s.spacing},
                      {"dim", s.dim},
                      {"betas", s.betas},
                      {"direction", s.direction == ShiftDirection::Plus ? "plus" : "minus"},
                      {"flux_steps", s.flux_steps},
                      {"mode", s.mode == SweepStateMode::FixedState ? "fixed_state" : "rediagonalize"}};
    }
    return j;
}

std::vector<Spacing> lc_charge_grids() {
    return {Spacing::make(1, 20), Spacing::make(1, 15), Spacing::make(1, 10), Spacing::make(1, 8),
            Spacing::make(1, 6),  Spacing::make(1, 5),  Spacing::make(1, 4),  Spacing::make(3, 10),
            Spacing::make(1, 3),  Spacing::make(7, 20), Spacing::make(2, 5),  Spacing::make(9, 20),
            Spacing::make(1, 2),  Spacing::make(3, 5),  Spacing::make(3, 4),  Spacing::make(1, 1),
            Spacing::make(5, 4),  Spacing::make(3, 2),  Spacing::make(2, 1)};
}

std::vector<Spacing> phase_grids() {
    const std::int64_t g[][2] = {{1, 64}, {1, 32}, {1, 16}, {3, 32}, {1, 8}, {5, 32}, {3, 16}, {7, 32}, {1, 4},
                                 {1, 3},  {5, 12}, {1, 2},  {2, 3},  {3, 4}, {1, 1},  {3, 2},  {2, 1},  {3, 1}};
    std::vector<Spacing> out;
    for (const auto& p : g) out.push_back(Spacing::make(p[0], p[1], true));
    return out;
}

std::vector<Spacing> fluxonium_charge_grids() {
    std::vector<Spacing> out;
    for (int n = 1; n <= 15; ++n) out.push_back(Spacing::make(1, n));
    return out;
}

std::vector<Spacing> fd_grids() {
    const std::int64_t g[][2] = {{1, 512}, {1, 384}, {1, 256}, {1, 192}, {1, 128}, {1, 80}, {1, 64}, {1, 48}, {1, 32},
                                 {1, 24},  {1, 16},  {1, 12},  {1, 8},   {1, 6},   {1, 4},  {1, 2},  {3, 4}};
    std::vector<Spacing> out;
    for (const auto& p : g) out.push_back(Spacing::make(p[0], p[1], true));
    return out;
}

namespace {

void add_dvr(RunConfig& c, DvrKind kind, const std::vector<Spacing>& grids) {
    for (const auto& s : grids) c.representations.push_back({DvrRepresentation{kind, s, false}, std::nullopt});
}

RunConfig transmon_preset(CircuitSpec circuit) {
    RunConfig c;
    c.circuit = circuit;
    c.sizes = odd_sizes(3, 101, 2);
    c.representations.push_back({ChargeBasisRepresentation{}, std::nullopt});
    c.representations.push_back({DvrRepresentation{DvrKind::TruncatedPhase, Spacing::make(1, 1), true}, std::nullopt});
    c.representations.push_back({FdRepresentation{std::nullopt, 1}, std::nullopt});
    c.level_study = LevelStudyConfig{};
    c.decompose = DecomposeConfig{{ChargeBasisRepresentation{},
                                   DvrRepresentation{DvrKind::TruncatedPhase, Spacing::make(1, 1), true}},
                                  23, 11, 1e-10};
    return c;
}

}  // namespace

std::vector<std::string> preset_names() { return {"lc", "fluxonium", "transmon-tl", "transmon-cl"}; }

RunConfig preset(std::string_view name) {
    RunConfig c;
    if (name == "lc") {
        c.circuit = CircuitSpec::lc(1.0, 1.0);
        c.scale = CurveScale::LcScaled;
        add_dvr(c, DvrKind::TraditionalCharge, lc_charge_grids());
        add_dvr(c, DvrKind::TruncatedCharge, lc_charge_grids());
        add_dvr(c, DvrKind::TraditionalPhase, phase_grids());
        add_dvr(c, DvrKind::TruncatedPhase, phase_grids());
        for (const auto& s : fd_grids()) c.representations.push_back({FdRepresentation{s, 1}, odd_sizes(3, 701, 2)});
    } else if (name == "fluxonium") {
        c.circuit = CircuitSpec::fluxonium(2.5, 0.5, 10.0, 0.5);
        c.representations.push_back({HoRepresentation{LengthScale::LC, kDefaultEmbedDim}, std::nullopt});
        c.representations.push_back({HoRepresentation{LengthScale::Plasma, kDefaultEmbedDim}, std::nullopt});
        add_dvr(c, DvrKind::TraditionalPhase, phase_grids());
        add_dvr(c, DvrKind::TruncatedPhase, phase_grids());
        add_dvr(c, DvrKind::TraditionalCharge, fluxonium_charge_grids());
        add_dvr(c, DvrKind::TruncatedCharge, fluxonium_charge_grids());
        const Representation phase{DvrRepresentation{DvrKind::TraditionalPhase, Spacing::make(5, 32, true), false}};
        const Representation charge{DvrRepresentation{DvrKind::TraditionalCharge, Spacing::make(1, 5), false}};
        const Representation ho{HoRepresentation{LengthScale::LC, kDefaultEmbedDim}};
        c.level_study = LevelStudyConfig{{phase, charge, ho}, {0, 1, 2, 3, 4}};
        c.decompose = DecomposeConfig{{phase, charge, ho}, 81, 8, 1e-25};
        c.shift = FluxSweepConfig{};
        c.shift->circuit = c.circuit;
    } else if (name == "transmon-tl") {
        c = transmon_preset(CircuitSpec::transmon(0.2, 10.0, 0.5));
    } else if (name == "transmon-cl") {
        c = transmon_preset(CircuitSpec::transmon(5.0, 5.0, 0.5));
    } else {
        throw ConfigError("--preset: unknown preset '" + std::string(name) + "' (lc, fluxonium, transmon-tl, transmon-cl)");
    }
    c.validate();
    return c;
}

}  // namespace sincdvr
