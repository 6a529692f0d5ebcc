#include "sincdvr/rational.hpp"

#include <numeric>

#include "sincdvr/error.hpp"

namespace sincdvr {

Spacing Spacing::make(std::int64_t num, std::int64_t den, bool pi) {
    if (den == 0) throw ConfigError("spacing: denominator must be nonzero");
    if (den < 0) {
        num = -num;
        den = -den;
    }
    if (num <= 0) throw ConfigError("spacing: value must be strictly positive");
    const std::int64_t g = std::gcd(num, den);
    return Spacing{num / g, den / g, pi};
}

std::string Spacing::to_string() const {
    std::string out;
    if (pi) {
        out = (num == 1 ? std::string{} : std::to_string(num)) + "pi";
    } else {
        out = std::to_string(num);
    }
    if (den != 1) out += "/" + std::to_string(den);
    return out;
}

Spacing truncated_conjugate(const Spacing& s, std::int64_t dim) {
    if (dim <= 0 || dim % 2 == 0) throw ConfigError("truncated grid dimension must be odd and positive");
    // (p/q)[pi] * x = 2 pi / dim  =>  x = 2q / (dim p) [pi removed or added]
    return Spacing::make(2 * s.den, dim * s.num, !s.pi);
}

}  // namespace sincdvr
