#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "sincdvr/circuits.hpp"
#include "sincdvr/dvr_basis.hpp"
#include "sincdvr/operator_matrix.hpp"
#include "sincdvr/spectra.hpp"

namespace sincdvr {

/// Expansion coefficients of a state in some basis. Row r carries the basis
/// label `first_index + r` (alpha = -M..M for DVRs, m = 0.. for the HO basis).
struct StateVector {
    CVector coefficients;
    std::string basis_tag;
    std::int64_t first_index = 0;

    /// Throws NumericalError unless the norm is 1 within 1e-12.
    [[nodiscard]] static StateVector normalized_checked(CVector c, std::string tag, std::int64_t first_index);
    [[nodiscard]] double norm() const { return coefficients.norm(); }
};

/// Eigenvector `level` of a spectrum, labelled for the given DVR basis.
[[nodiscard]] StateVector eigenstate(const Spectrum& spectrum, const DvrBasis& basis, int level);

struct ContributionRow {
    int level = 0;
    std::int64_t index = 0;
    double magnitude_sq = 0.0;  ///< |<Psi_level|psi_index>|^2, unfloored
};

/// |c|^2 for the first `levels` eigenvectors, rows ordered by level then index.
[[nodiscard]] std::vector<ContributionRow> decompose(const Spectrum& spectrum, int levels, std::int64_t first_index);

/// CSV: level,alpha,magnitude_sq_floored with values raised to at least `floor`.
void write_decomposition_csv(std::ostream& os, const std::vector<ContributionRow>& rows, double floor);

/// Plus moves Psi(theta) to Psi(theta + phi), Minus to Psi(theta - phi), with phi = beta * dtheta.
enum class ShiftDirection { Plus, Minus };

struct ShiftSpec {
    std::int64_t beta = 0;
    ShiftDirection direction = ShiftDirection::Minus;

    [[nodiscard]] double phi(const DvrBasis& basis) const { return static_cast<double>(beta) * basis.step(); }
};

/// beta-th power of the single-step shift sum_alpha |psi_(alpha -+ 1)><psi_alpha|.
/// Traditional bases drop coefficients pushed past +-M; truncated bases wrap mod 2M+1.
[[nodiscard]] OperatorMatrix shift_operator(const DvrBasis& basis, const ShiftSpec& shift);

struct ShiftResult {
    StateVector state;
    double norm = 0.0;  ///< post-shift norm; below 1 when a traditional shift evicted weight
};

/// Index-shift fast path, entrywise equal to shift_operator(basis, shift) * state.
[[nodiscard]] ShiftResult apply_shift(const StateVector& state, const DvrBasis& basis, const ShiftSpec& shift);

/// Real part of <state|op|state>; throws NumericalError when the imaginary
/// residue exceeds 1e-12 (relative to max|op|) and ConfigError on a size mismatch.
[[nodiscard]] double expectation(const OperatorMatrix& op, const StateVector& state);

enum class SweepStateMode { FixedState, Rediagonalize };

/// Energy and supercurrent of a phase-shifted fluxonium ground state against flux.
struct FluxSweepConfig {
    CircuitSpec circuit = CircuitSpec::fluxonium(2.5, 0.5, 10.0, 0.5);
    DvrKind kind = DvrKind::TraditionalPhase;
    Spacing spacing = Spacing::make(1, 8, true);
    Eigen::Index dim = 101;
    std::vector<std::int64_t> betas = {0, 4, 16};  ///< phi = 0, pi/2, 2pi at dtheta = pi/8
    ShiftDirection direction = ShiftDirection::Minus;
    int flux_steps = 100;                            ///< A = k / flux_steps, k = 0..flux_steps
    SweepStateMode mode = SweepStateMode::FixedState;
};

struct FluxSweepRow {
    double A = 0.0;
    double phi = 0.0;
    double energy_GHz = 0.0;
    double current_over_Ic = 0.0;
    double norm = 0.0;
};

/// FixedState prepares the ground state once at the circuit's own A and sweeps
/// the operators; Rediagonalize prepares the ground state at every A.
/// Rows are ordered by phi (in `betas` order) then A.
[[nodiscard]] std::vector<FluxSweepRow> flux_sweep(const FluxSweepConfig& cfg, unsigned threads = 1);

/// CSV: A,phi,energy_GHz,current_over_Ic
void write_flux_sweep_csv(std::ostream& os, const std::vector<FluxSweepRow>& rows);

}  // namespace sincdvr
