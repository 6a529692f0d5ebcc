#pragma once

#include <cstdint>
#include <vector>

#include "sincdvr/circuits.hpp"
#include "sincdvr/operator_matrix.hpp"

namespace sincdvr {

enum class FdBoundary { Bounded, Periodic };

/// Uniform phase grid theta_i = i * spacing, i = -N..N, with a centered
/// (2M+1)-point second-derivative stencil (accuracy order 2M).
struct FdGrid {
    double spacing = 0.0;
    std::int64_t half_points = 0;  ///< N
    int order_M = 1;
    FdBoundary boundary = FdBoundary::Bounded;

    [[nodiscard]] Eigen::Index dim() const noexcept { return static_cast<Eigen::Index>(2 * half_points + 1); }

    /// Periodic grid covering [-pi, pi): spacing = 2 pi / (2N+1).
    [[nodiscard]] static FdGrid periodic(std::int64_t half_points, int order_M = 1);

    void validate() const;
    [[nodiscard]] std::string tag() const;
};

/// Centered second-derivative weights at unit spacing, taps -M..M, obtained by
/// inverting the (2M+1)x(2M+1) Taylor matrix and reading off the row of the
/// second derivative.
[[nodiscard]] std::vector<double> fd_coefficients(int order_M);

/// Stencil matrix D2 / spacing^2. Bounded grids drop out-of-grid taps; periodic
/// grids wrap them modulo 2N+1, multiplying wrapped couplings by
/// exp(+-i 2 pi twist) (a Bloch phase; twist = 0 is plain periodicity).
[[nodiscard]] OperatorMatrix fd_second_derivative(const FdGrid& grid, double twist = 0.0);

/// H = -4 E_C D2 + diag(V(theta_i)).
///
/// LC and fluxonium need a bounded grid; the transmon a periodic one. The
/// transmon offset charge is carried by the gauge psi -> exp(i N_g theta) psi,
/// which turns (N - N_g)^2 into a plain N^2 with twisted boundary condition
/// psi(theta + 2 pi) = exp(i 2 pi N_g) psi(theta).
[[nodiscard]] OperatorMatrix fd_hamiltonian(const CircuitSpec& spec, const FdGrid& grid);

}  // namespace sincdvr
