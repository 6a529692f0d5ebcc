#include "sincdvr/circuits.hpp"

#include <cmath>

#include "sincdvr/error.hpp"

namespace sincdvr {

std::string_view to_string(CircuitFamily f) noexcept {
    switch (f) {
        case CircuitFamily::LC: return "LC";
        case CircuitFamily::Fluxonium: return "Fluxonium";
        case CircuitFamily::Transmon: return "Transmon";
    }
    return "?";
}

CircuitFamily parse_family(std::string_view name) {
    if (name == "LC") return CircuitFamily::LC;
    if (name == "Fluxonium") return CircuitFamily::Fluxonium;
    if (name == "Transmon") return CircuitFamily::Transmon;
    throw ConfigError("circuit.family: unknown family '" + std::string(name) +
                      "' (expected LC, Fluxonium or Transmon)");
}

CircuitSpec CircuitSpec::lc(double E_C, double E_L) {
    CircuitSpec s{CircuitFamily::LC, E_C, E_L, std::nullopt, std::nullopt, std::nullopt};
    s.validate();
    return s;
}

CircuitSpec CircuitSpec::fluxonium(double E_C, double E_L, double E_J, double A) {
    CircuitSpec s{CircuitFamily::Fluxonium, E_C, E_L, E_J, A, std::nullopt};
    s.validate();
    return s;
}

CircuitSpec CircuitSpec::transmon(double E_C, double E_J, double N_g) {
    CircuitSpec s{CircuitFamily::Transmon, E_C, std::nullopt, E_J, std::nullopt, N_g};
    s.validate();
    return s;
}

namespace {

void require_energy(std::string_view name, double v) {
    if (!std::isfinite(v) || v <= 0.0)
        throw ConfigError("circuit." + std::string(name) + ": energy must be finite and > 0");
}

void require(bool present, std::string_view field, CircuitFamily f) {
    if (!present)
        throw ConfigError("circuit." + std::string(field) + ": required for " +
                          std::string(to_string(f)));
}

void reject(bool present, std::string_view field, CircuitFamily f) {
    if (present)
        throw ConfigError("circuit." + std::string(field) + ": not applicable to " +
                          std::string(to_string(f)));
}

}  // namespace

void CircuitSpec::validate() const {
    require_energy("E_C", E_C);
    const bool lc = family == CircuitFamily::LC;
    const bool fl = family == CircuitFamily::Fluxonium;
    const bool tr = family == CircuitFamily::Transmon;

    if (lc || fl) {
        require(E_L.has_value(), "E_L", family);
        require_energy("E_L", *E_L);
    } else {
        reject(E_L.has_value(), "E_L", family);
    }
    if (fl || tr) {
        require(E_J.has_value(), "E_J", family);
        require_energy("E_J", *E_J);
    } else {
        reject(E_J.has_value(), "E_J", family);
    }
    if (fl) {
        require(A.has_value(), "A", family);
        if (!std::isfinite(*A)) throw ConfigError("circuit.A: must be finite");
    } else {
        reject(A.has_value(), "A", family);
    }
    if (tr) {
        require(N_g.has_value(), "N_g", family);
        if (!std::isfinite(*N_g)) throw ConfigError("circuit.N_g: must be finite");
    } else {
        reject(N_g.has_value(), "N_g", family);
    }
}

std::vector<HamiltonianTerm> terms(const CircuitSpec& spec) {
    spec.validate();
    switch (spec.family) {
        case CircuitFamily::LC:
            return {{4.0 * spec.E_C, OperatorKind::NSquared, 0.0},
                    {*spec.E_L / 2.0, OperatorKind::ThetaSquared, 0.0}};
        case CircuitFamily::Fluxonium:
            return {{4.0 * spec.E_C, OperatorKind::NSquared, 0.0},
                    {*spec.E_L / 2.0, OperatorKind::ThetaSquared, 0.0},
                    {-*spec.E_J, OperatorKind::CosTheta, *spec.A}};
        case CircuitFamily::Transmon:
            return {{4.0 * spec.E_C, OperatorKind::NShiftedSquared, *spec.N_g},
                    {-*spec.E_J, OperatorKind::CosTheta, 0.0}};
    }
    throw ConfigError("circuit.family: unknown");
}

void to_json(nlohmann::json& j, const CircuitSpec& spec) {
    j = nlohmann::json::object();
    j["family"] = std::string(to_string(spec.family));
    j["E_C"] = spec.E_C;
    if (spec.E_L) j["E_L"] = *spec.E_L;
    if (spec.E_J) j["E_J"] = *spec.E_J;
    if (spec.A) j["A"] = *spec.A;
    if (spec.N_g) j["N_g"] = *spec.N_g;
}

void from_json(const nlohmann::json& j, CircuitSpec& spec) {
    if (!j.is_object()) throw ConfigError("circuit: expected a JSON object");
    static constexpr std::string_view known[] = {"family", "E_C", "E_L", "E_J", "A", "N_g"};
    for (const auto& [key, _] : j.items()) {
        bool ok = false;
        for (auto k : known) ok = ok || key == k;
        if (!ok) throw ConfigError("circuit." + key + ": unknown field");
    }
    if (!j.contains("family") || !j["family"].is_string())
        throw ConfigError("circuit.family: required string");
    auto number = [&](const char* key) -> std::optional<double> {
        if (!j.contains(key)) return std::nullopt;
        if (!j[key].is_number()) throw ConfigError(std::string("circuit.") + key + ": expected a number");
        return j[key].get<double>();
    };
    CircuitSpec out;
    out.family = parse_family(j["family"].get<std::string>());
    auto ec = number("E_C");
    if (!ec) throw ConfigError("circuit.E_C: required");
    out.E_C = *ec;
    out.E_L = number("E_L");
    out.E_J = number("E_J");
    out.A = number("A");
    out.N_g = number("N_g");
    out.validate();
    spec = out;
}

}  // namespace sincdvr
