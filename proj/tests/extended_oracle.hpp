#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>

#include <Eigen/Eigenvalues>
#include <boost/multiprecision/cpp_bin_float.hpp>

/// Quad-precision (113-bit) oracle for the LC circuit in the traditional charge DVR.
/// Resolves converged errors far below the double-precision floor.
namespace sincdvr::oracle {

using Quad = boost::multiprecision::cpp_bin_float_quad;
using QuadMatrix = Eigen::Matrix<Quad, Eigen::Dynamic, Eigen::Dynamic>;
using QuadVector = Eigen::Matrix<Quad, Eigen::Dynamic, 1>;

/// Lowest eigenvalue of a symmetric tridiagonal matrix by Sturm-count bisection to full precision.
inline Quad lowest_tridiagonal_eigenvalue(const QuadVector& a, const QuadVector& b) {
    const Eigen::Index n = a.size();
    Quad lo = a(0);
    Quad hi = a(0);
    for (Eigen::Index i = 0; i < n; ++i) {
        const Quad r = (i > 0 ? abs(b(i - 1)) : Quad(0)) + (i + 1 < n ? abs(b(i)) : Quad(0));
        lo = std::min(lo, Quad(a(i) - r));
        hi = std::max(hi, Quad(a(i) + r));
    }
    for (int it = 0; it < 1000; ++it) {
        const Quad mid = (lo + hi) / 2;
        if (mid == lo || mid == hi) break;
        int below = 0;
        Quad q = a(0) - mid;
        if (q < 0) ++below;
        for (Eigen::Index i = 1; i < n; ++i) {
            if (q == 0) q = std::numeric_limits<Quad>::epsilon();
            q = a(i) - mid - b(i - 1) * b(i - 1) / q;
            if (q < 0) ++below;
        }
        (below >= 1 ? hi : lo) = mid;
    }
    return (lo + hi) / 2;
}

/// E_0 - sqrt(8 E_C E_L)/2 for LC(E_C, E_L) in the traditional charge DVR with
/// spacing num/den and dimension d, divided by sqrt(8 E_C E_L).
inline double lc_charge_dvr_scaled_error(double E_C, double E_L, std::int64_t num, std::int64_t den, std::int64_t d) {
    const Quad dn = Quad(num) / Quad(den);
    const Quad pi = acos(Quad(-1));
    const Quad ec = E_C;
    const Quad el = E_L;
    const std::int64_t M = (d - 1) / 2;
    QuadMatrix h(d, d);
    for (std::int64_t a = 0; a < d; ++a) {
        for (std::int64_t b = 0; b < d; ++b) {
            const std::int64_t k = a - b;
            // theta^2 in the sinc basis: (pi/dN)^2/3 on the diagonal, 2(-1)^k/(dN k)^2 off it.
            const Quad theta_sq = k == 0 ? pi * pi / (3 * dn * dn) : Quad(k % 2 ? -2 : 2) / (dn * dn * Quad(k * k));
            h(a, b) = el / 2 * theta_sq;
        }
        const Quad n = Quad(a - M) * dn;
        h(a, a) += 4 * ec * n * n;
    }
    const Eigen::Tridiagonalization<QuadMatrix> tri(h);
    const QuadVector diag = tri.diagonal();
    const QuadVector sub = tri.subDiagonal();
    const Quad omega = sqrt(8 * ec * el);
    return static_cast<double>((lowest_tridiagonal_eigenvalue(diag, sub) - omega / 2) / omega);
}

}  // namespace sincdvr::oracle
