#include "sincdvr/fdm.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "sincdvr/error.hpp"

namespace sincdvr {

FdGrid FdGrid::periodic(std::int64_t half_points, int order_M) {
    FdGrid g{2.0 * std::numbers::pi / static_cast<double>(2 * half_points + 1), half_points, order_M,
             FdBoundary::Periodic};
    g.validate();
    return g;
}

void FdGrid::validate() const {
    if (!(spacing > 0.0) || !std::isfinite(spacing)) throw ConfigError("fd.spacing: must be finite and > 0");
    if (half_points < 0) throw ConfigError("fd.half_points: must be >= 0");
    if (order_M < 1) throw ConfigError("fd.order: must be >= 1");
    if (order_M > half_points) throw ConfigError("fd.order: stencil half-width exceeds grid half-size");
    if (boundary == FdBoundary::Periodic) {
        const double expected = 2.0 * std::numbers::pi / static_cast<double>(dim());
        if (std::abs(spacing - expected) > 1e-12 * expected)
            throw ConfigError("fd.spacing: periodic grids need spacing 2pi/(2N+1) so the wrap lands on grid points");
    }
}

std::string FdGrid::tag() const {
    return std::string("FD(") + (boundary == FdBoundary::Bounded ? "bounded" : "periodic") +
           ",h=" + std::to_string(spacing) + ",M=" + std::to_string(order_M) + ")";
}

std::vector<double> fd_coefficients(int order_M) {
    if (order_M < 1) throw ConfigError("fd_coefficients: order must be >= 1");
    const int n = 2 * order_M + 1;
    RMatrix F(n, n);
    for (int j = 0; j < n; ++j) {
        const double x = static_cast<double>(j - order_M);
        double term = 1.0;
        for (int k = 0; k < n; ++k) {
            F(j, k) = term;  // x^k / k!
            term *= x / static_cast<double>(k + 1);
        }
    }
    Eigen::PartialPivLU<RMatrix> lu(F);
    if (!(lu.rcond() > 1e-14)) throw NumericalError("fd_coefficients: Taylor matrix is singular");
    const RMatrix inv = lu.inverse();
    std::vector<double> c(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) c[static_cast<std::size_t>(j)] = inv(2, j);
    // The exact stencil is symmetric; average out rounding from the inverse.
    for (int j = 0; j < order_M; ++j) {
        const double avg = 0.5 * (c[static_cast<std::size_t>(j)] + c[static_cast<std::size_t>(n - 1 - j)]);
        c[static_cast<std::size_t>(j)] = c[static_cast<std::size_t>(n - 1 - j)] = avg;
    }
    return c;
}

OperatorMatrix fd_second_derivative(const FdGrid& grid, double twist) {
    grid.validate();
    const auto c = fd_coefficients(grid.order_M);
    const Eigen::Index d = grid.dim();
    const double inv_h2 = 1.0 / (grid.spacing * grid.spacing);
    const double phi = 2.0 * std::numbers::pi * twist;
    const cplx forward{std::cos(phi), std::sin(phi)};

    CMatrix m = CMatrix::Zero(d, d);
    for (Eigen::Index i = 0; i < d; ++i) {
        for (int t = -grid.order_M; t <= grid.order_M; ++t) {
            const double w = c[static_cast<std::size_t>(t + grid.order_M)] * inv_h2;
            Eigen::Index j = i + t;
            cplx factor = 1.0;
            if (j < 0 || j >= d) {
                if (grid.boundary == FdBoundary::Bounded) continue;
                // psi(theta_j) with theta_j beyond +pi equals exp(i 2 pi twist) psi(theta_j - 2 pi).
                if (j >= d) {
                    j -= d;
                    factor = forward;
                } else {
                    j += d;
                    factor = std::conj(forward);
                }
            }
            m(i, j) += w * factor;
        }
    }
    return {std::move(m), grid.tag()};
}

OperatorMatrix fd_hamiltonian(const CircuitSpec& spec, const FdGrid& grid) {
    spec.validate();
    grid.validate();
    const bool transmon = spec.family == CircuitFamily::Transmon;
    if (transmon && grid.boundary != FdBoundary::Periodic)
        throw ConfigError("fd: the transmon potential is 2pi-periodic and needs a periodic grid");
    if (!transmon && grid.boundary != FdBoundary::Bounded)
        throw ConfigError("fd: LC and fluxonium potentials are unbounded in theta and need a bounded grid");

    OperatorMatrix h = fd_second_derivative(grid, transmon ? spec.offset_charge() : 0.0).scaled(-4.0 * spec.E_C);
    const double shift = 2.0 * std::numbers::pi * spec.flux();
    for (Eigen::Index i = 0; i < grid.dim(); ++i) {
        const double theta = static_cast<double>(i - grid.half_points) * grid.spacing;
        double v = 0.0;
        switch (spec.family) {
            case CircuitFamily::LC: v = 0.5 * *spec.E_L * theta * theta; break;
            case CircuitFamily::Fluxonium:
                v = 0.5 * *spec.E_L * theta * theta - *spec.E_J * std::cos(theta + shift);
                break;
            case CircuitFamily::Transmon: v = -*spec.E_J * std::cos(theta); break;
        }
        h.entries(i, i) += v;
    }
    return h;
}

}  // namespace sincdvr
