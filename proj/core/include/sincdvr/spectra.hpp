#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "sincdvr/circuits.hpp"
#include "sincdvr/dvr_basis.hpp"
#include "sincdvr/fdm.hpp"
#include "sincdvr/ho_basis.hpp"
#include "sincdvr/operator_matrix.hpp"

namespace sincdvr {

/// A sinc-DVR family at fixed grid spacing; the matrix size is supplied later.
/// With `conjugate` set (truncated kinds only) the spacing fixes the conjugate
/// grid instead, so the discretized spacing follows 2 pi / ((2M+1) spacing).
struct DvrRepresentation {
    DvrKind kind = DvrKind::TraditionalPhase;
    Spacing spacing;
    bool conjugate = false;

    [[nodiscard]] DvrBasis basis(Eigen::Index dim) const;
};

struct HoRepresentation {
    LengthScale scale = LengthScale::LC;
    Eigen::Index embed_dim = kDefaultEmbedDim;
};

/// Finite differences. Bounded grids take an explicit spacing; the transmon
/// uses a periodic grid whose spacing is 2 pi / dim, so `spacing` stays empty.
struct FdRepresentation {
    std::optional<Spacing> spacing;
    int order = 1;
};

/// The standard charge basis, i.e. a traditional charge DVR with dN = 1.
struct ChargeBasisRepresentation {};

using Representation =
    std::variant<DvrRepresentation, HoRepresentation, FdRepresentation, ChargeBasisRepresentation>;

/// Short label, e.g. "TraditionalPhase", "HO", "FD", "ChargeBasis".
[[nodiscard]] std::string rep_kind(const Representation& rep);
/// Kind plus grid, e.g. "TruncatedPhase(dN=1)", "HO(LC)", "FD(pi/64,M=1)".
[[nodiscard]] std::string describe(const Representation& rep);
/// The grid spacing the representation is parameterized by, if any.
[[nodiscard]] std::optional<Spacing> rep_spacing(const Representation& rep);

/// Throws ConfigError when the representation cannot express the circuit (for
/// example a transmon in a basis that is not 2pi-periodic in phase).
void check_compatible(const CircuitSpec& spec, const Representation& rep);

/// Dimension rules: DVR, FD and charge-basis sizes are odd (2M+1); HO any >= 1.
/// FD sizes also hold the full stencil (2 order + 1 points).
void check_dimension(const Representation& rep, Eigen::Index dim);

/// Hermitian Hamiltonian matrix (GHz) of `spec` in `rep` at matrix size `dim`.
[[nodiscard]] OperatorMatrix assemble(const CircuitSpec& spec, const Representation& rep, Eigen::Index dim);

struct Spectrum {
    RVector energies;   ///< ascending, GHz
    CMatrix eigvectors; ///< columns, unit norm (empty when not requested)
    Eigen::Index dim = 0;
};

/// Lowest k eigenpairs of a Hermitian matrix. Real matrices take a
/// real-symmetric LAPACK path, complex ones the Hermitian path, and real
/// tridiagonal matrices without requested vectors go to bisection.
[[nodiscard]] Spectrum eigensolve(const OperatorMatrix& h, Eigen::Index k, bool vectors = true);

/// Lowest k eigenvalues of a real symmetric tridiagonal matrix by bisection,
/// accurate to roughly machine precision relative to the local entries.
[[nodiscard]] RVector tridiagonal_eigenvalues(const RVector& diag, const RVector& offdiag, Eigen::Index k);

/// Reference energy of a level:
///   LC        sqrt(8 E_C E_L) (n + 1/2)
///   fluxonium HO basis at the LC length scale, 1001 states
///   transmon  charge basis with 401 states
/// Numerical references are memoized per circuit.
[[nodiscard]] double reference_energy(const CircuitSpec& spec, int level);

inline constexpr Eigen::Index kFluxoniumReferenceDim = 1001;
inline constexpr Eigen::Index kTransmonReferenceDim = 401;

/// Charge-basis transmon energies at an arbitrary (odd) size, the oracle
/// behind the transmon reference.
[[nodiscard]] RVector transmon_charge_oracle(const CircuitSpec& spec, Eigen::Index dim, Eigen::Index levels);

/// Fluxonium HO-basis energies at size `dim` with cos embedded in `embed_dim`.
[[nodiscard]] RVector fluxonium_ho_oracle(const CircuitSpec& spec, Eigen::Index dim, Eigen::Index embed_dim,
                                          Eigen::Index levels);

void to_json(nlohmann::json& j, const Representation& rep);
[[nodiscard]] Representation representation_from_json(const nlohmann::json& j);

}  // namespace sincdvr
