#pragma once

#include <cstdint>
#include <numbers>
#include <string>

namespace sincdvr {

/// Exact grid spacing num/den, optionally carrying a factor of pi.
///
/// Phase grids are quoted as rational multiples of pi (pi/8, 5pi/32, 2pi/23)
/// and charge grids as plain rationals (1/4, 9/20). Keeping them exact lets
/// integrality checks such as "1/dN is an integer" be decided without
/// floating point.
struct Spacing {
    std::int64_t num = 1;
    std::int64_t den = 1;
    bool pi = false;

    /// Reduced form; throws ConfigError if den == 0 or the value is not positive.
    [[nodiscard]] static Spacing make(std::int64_t num, std::int64_t den, bool pi = false);

    [[nodiscard]] double value() const noexcept {
        const double r = static_cast<double>(num) / static_cast<double>(den);
        return pi ? r * std::numbers::pi : r;
    }

    /// Rational part only (the coefficient of pi when pi == true).
    [[nodiscard]] double ratio() const noexcept {
        return static_cast<double>(num) / static_cast<double>(den);
    }

    /// True when 1/value is a positive integer (never for pi-carrying spacings).
    [[nodiscard]] bool reciprocal_is_integer() const noexcept { return !pi && num == 1; }

    /// "5pi/32", "9/20", "1", "pi".
    [[nodiscard]] std::string to_string() const;

    friend bool operator==(const Spacing&, const Spacing&) = default;
};

/// Conjugate spacing of a (2M+1)-point truncated grid: dx * dp = 2 pi / (2M+1).
/// Given a plain rational p/q returns 2q/((2M+1)p) pi, and vice versa.
[[nodiscard]] Spacing truncated_conjugate(const Spacing& s, std::int64_t dim);

}  // namespace sincdvr
