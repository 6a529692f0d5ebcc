#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

namespace sincdvr {

enum class CircuitFamily { LC, Fluxonium, Transmon };

[[nodiscard]] std::string_view to_string(CircuitFamily f) noexcept;
[[nodiscard]] CircuitFamily parse_family(std::string_view name);

/// Single-node circuit. Energies are E/h in GHz.
///
/// Fields that do not apply to the family stay empty: LC has no E_J,
/// transmon has no E_L, only fluxonium carries a flux ratio and only the
/// transmon an offset charge.
struct CircuitSpec {
    CircuitFamily family = CircuitFamily::LC;
    double E_C = 0.0;
    std::optional<double> E_L;
    std::optional<double> E_J;
    std::optional<double> A;    // flux ratio Phi_ext / Phi_0
    std::optional<double> N_g;  // offset charge

    [[nodiscard]] static CircuitSpec lc(double E_C, double E_L);
    [[nodiscard]] static CircuitSpec fluxonium(double E_C, double E_L, double E_J, double A);
    [[nodiscard]] static CircuitSpec transmon(double E_C, double E_J, double N_g);

    /// Throws ConfigError naming the offending field.
    void validate() const;

    [[nodiscard]] double flux() const noexcept { return A.value_or(0.0); }
    [[nodiscard]] double offset_charge() const noexcept { return N_g.value_or(0.0); }

    friend bool operator==(const CircuitSpec&, const CircuitSpec&) = default;
};

enum class OperatorKind { NSquared, NShiftedSquared, ThetaSquared, CosTheta };

/// coefficient * operator, where the operator is one of
///   N^2, (N - shift)^2, theta^2, cos(theta + 2 pi shift).
struct HamiltonianTerm {
    double coefficient = 0.0;
    OperatorKind kind = OperatorKind::NSquared;
    double shift = 0.0;

    friend bool operator==(const HamiltonianTerm&, const HamiltonianTerm&) = default;
};

/// Ordered term list of the circuit Hamiltonian:
///   LC        4E_C N^2 + (E_L/2) theta^2
///   fluxonium 4E_C N^2 + (E_L/2) theta^2 - E_J cos(theta + 2 pi A)
///   transmon  4E_C (N - N_g)^2 - E_J cos(theta)
[[nodiscard]] std::vector<HamiltonianTerm> terms(const CircuitSpec& spec);

void to_json(nlohmann::json& j, const CircuitSpec& spec);
void from_json(const nlohmann::json& j, CircuitSpec& spec);

}  // namespace sincdvr
