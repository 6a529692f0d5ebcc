#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "sincdvr/operator_matrix.hpp"
#include "sincdvr/rational.hpp"

namespace sincdvr {

/// The four sinc DVRs. "Traditional" DVRs are the infinite-grid sinc bases
/// used inside a finite matrix; "truncated" DVRs are finite by construction,
/// with a discrete conjugate variable related to the grid by a DFT.
enum class DvrKind { TraditionalPhase, TraditionalCharge, TruncatedPhase, TruncatedCharge };

[[nodiscard]] std::string_view to_string(DvrKind k) noexcept;
[[nodiscard]] DvrKind parse_dvr_kind(std::string_view name);

[[nodiscard]] constexpr bool is_phase(DvrKind k) noexcept {
    return k == DvrKind::TraditionalPhase || k == DvrKind::TruncatedPhase;
}
[[nodiscard]] constexpr bool is_truncated(DvrKind k) noexcept {
    return k == DvrKind::TruncatedPhase || k == DvrKind::TruncatedCharge;
}

/// A sinc-DVR grid x_alpha = alpha * spacing, alpha = -M..M.
///
/// The spacing is that of the discretized variable: dtheta (a multiple of pi)
/// for phase kinds, dN (a plain rational) for charge kinds.
class DvrBasis {
public:
    [[nodiscard]] static DvrBasis make(DvrKind kind, Spacing spacing, std::int64_t M);

    /// Truncated basis specified through its conjugate spacing instead, e.g. a
    /// truncated phase DVR with dN = 1 and therefore dtheta = 2 pi / (2M+1).
    [[nodiscard]] static DvrBasis with_conjugate_spacing(DvrKind kind, Spacing conjugate, std::int64_t M);

    [[nodiscard]] DvrKind kind() const noexcept { return kind_; }
    [[nodiscard]] const Spacing& spacing() const noexcept { return spacing_; }
    [[nodiscard]] std::int64_t M() const noexcept { return M_; }
    [[nodiscard]] Eigen::Index dim() const noexcept { return static_cast<Eigen::Index>(2 * M_ + 1); }

    [[nodiscard]] double step() const noexcept { return spacing_.value(); }
    /// N_max = pi/dtheta for phase kinds, theta_max = pi/dN for charge kinds.
    [[nodiscard]] double conjugate_bound() const noexcept;
    /// Normalization c_alpha = 1/spacing.
    [[nodiscard]] double weight() const noexcept { return 1.0 / step(); }
    /// Truncated kinds only: spacing of the discrete conjugate grid.
    [[nodiscard]] Spacing conjugate_spacing() const;

    [[nodiscard]] std::int64_t alpha(Eigen::Index row) const noexcept { return static_cast<std::int64_t>(row) - M_; }
    [[nodiscard]] Eigen::Index row(std::int64_t alpha) const noexcept { return static_cast<Eigen::Index>(alpha + M_); }

    [[nodiscard]] std::string tag() const;

    friend bool operator==(const DvrBasis&, const DvrBasis&) = default;

private:
    DvrBasis(DvrKind k, Spacing s, std::int64_t M) : kind_(k), spacing_(s), M_(M) {}

    DvrKind kind_;
    Spacing spacing_;
    std::int64_t M_;
};

[[nodiscard]] std::vector<double> grid_points(const DvrBasis& basis);

/// Diagonal approximation: f evaluated at every grid point.
[[nodiscard]] OperatorMatrix diag_of_discretized(const DvrBasis& basis, const std::function<double(double)>& f);

/// N (phase kinds) or theta (charge kinds), power 1 or 2, from the closed-form
/// infinite-grid matrix elements placed in a finite (2M+1)^2 matrix.
[[nodiscard]] OperatorMatrix conj_moment_traditional(const DvrBasis& basis, int power);

/// F^dagger diag(g(y_n)) F for a truncated basis, where y_n = n * conjugate
/// spacing and F is the centered unitary DFT pairing the grid with the
/// conjugate grid. Assembled in O(d^2) from the DFT of g.
[[nodiscard]] OperatorMatrix conjugate_function_truncated(const DvrBasis& basis, const std::function<double(double)>& g);

/// Truncated-kind conjugate moment y^power (power 1 or 2).
[[nodiscard]] OperatorMatrix conj_moment_truncated(const DvrBasis& basis, int power);

/// Centered unitary DFT matrix F[n, alpha] = exp(sign * i 2 pi n alpha / d) / sqrt(d)
/// with n, alpha in [-M, M]. Truncated phase kinds use sign = +1, charge kinds -1.
[[nodiscard]] CMatrix centered_dft_matrix(Eigen::Index dim, int sign);

/// The DFT sign that makes F diagonalize the conjugate variable of `kind`.
[[nodiscard]] constexpr int dft_sign(DvrKind kind) noexcept { return is_phase(kind) ? +1 : -1; }

/// cos(theta + sign * 2 pi A) in a charge DVR with integer 1/dN = k: two bands
/// at offsets +-k with entries exp(+-i 2 pi A)/2.
[[nodiscard]] OperatorMatrix cosine_in_charge(const DvrBasis& basis, double A, int sign = +1);

/// sin(theta + 2 pi A), diagonal in phase DVRs.
[[nodiscard]] OperatorMatrix sine_in_phase(const DvrBasis& basis, double A);

/// Closed-form basis function psi_beta evaluated at x (sinc for traditional,
/// Dirichlet kernel for truncated kinds).
[[nodiscard]] double basis_function(const DvrBasis& basis, std::int64_t beta, double x);

struct DvrSelfCheck {
    double interpolation_defect = 0.0;  ///< max |psi_beta(x_alpha) - sqrt(c) delta|
    double overlap_defect = 0.0;        ///< max |<psi_a|psi_b> - delta| by fine-grid quadrature
    std::optional<double> periodicity_defect;  ///< truncated kinds only
    std::int64_t samples = 0;
};

/// Numerical verification of the interpolation and orthonormality properties
/// on a grid refined by fine_factor (>= 4). Traditional overlaps are summed
/// over a finite window, so their defect decays like 1/window rather than
/// reaching round-off.
[[nodiscard]] DvrSelfCheck dvr_selfcheck(const DvrBasis& basis, int fine_factor);

void to_json(nlohmann::json& j, const Spacing& s);
void from_json(const nlohmann::json& j, Spacing& s);
void to_json(nlohmann::json& j, const DvrBasis& b);
[[nodiscard]] DvrBasis dvr_basis_from_json(const nlohmann::json& j);

}  // namespace sincdvr
