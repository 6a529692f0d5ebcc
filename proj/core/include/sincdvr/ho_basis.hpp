#pragma once

#include <string_view>

#include "sincdvr/circuits.hpp"
#include "sincdvr/operator_matrix.hpp"

namespace sincdvr {

enum class LengthScale { LC, Plasma };

[[nodiscard]] std::string_view to_string(LengthScale s) noexcept;
[[nodiscard]] LengthScale parse_length_scale(std::string_view name);

/// theta0 for the LC frequency, (8 E_C / E_L)^(1/4), or for the plasma
/// frequency, (sqrt(8 E_C E_J) / E_L)^(1/2). Transmon specs are rejected.
[[nodiscard]] double length_scale(const CircuitSpec& spec, LengthScale which);

inline constexpr Eigen::Index kDefaultEmbedDim = 1001;

/// Harmonic-oscillator basis |0>..|dim-1> with theta = theta0 (a^+ + a)/sqrt2.
/// Functions of theta are evaluated in a larger embed_dim space and then cut
/// down to the leading dim x dim block.
struct HoBasis {
    double theta0 = 1.0;
    Eigen::Index dim = 1;
    Eigen::Index embed_dim = kDefaultEmbedDim;

    void validate() const;
    [[nodiscard]] std::string tag() const;
};

struct HoOperators {
    OperatorMatrix theta;
    OperatorMatrix n;
};

/// Truncated tridiagonal theta (real) and N (imaginary, antisymmetric).
[[nodiscard]] HoOperators ho_operators(const HoBasis& basis);

/// Leading blocks of theta^2 and N^2 of the untruncated oscillator (exact
/// pentadiagonal elements, no edge defect in the last row).
[[nodiscard]] OperatorMatrix ho_theta_squared(const HoBasis& basis);
[[nodiscard]] OperatorMatrix ho_n_squared(const HoBasis& basis);

/// cos(theta + 2 pi A): eigendecompose theta in embed_dim, apply cos to its
/// spectrum, return the leading dim x dim block. The embedded decomposition is
/// cached per (theta0, embed_dim) behind a mutex.
[[nodiscard]] OperatorMatrix cos_in_ho(const HoBasis& basis, double A);

}  // namespace sincdvr
