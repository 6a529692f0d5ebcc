#include "sincdvr/dvr_basis.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "sincdvr/error.hpp"

namespace sincdvr {

namespace {

constexpr double kPi = std::numbers::pi;

// exp(i 2 pi m / d) for m in [0, d), so every phase is reduced exactly before
// the trig call.
std::vector<cplx> twiddles(Eigen::Index d) {
    std::vector<cplx> w(static_cast<std::size_t>(d));
    for (Eigen::Index m = 0; m < d; ++m) {
        const double phi = 2.0 * kPi * static_cast<double>(m) / static_cast<double>(d);
        w[static_cast<std::size_t>(m)] = {std::cos(phi), std::sin(phi)};
    }
    return w;
}

std::size_t wrap(std::int64_t m, std::int64_t d) {
    return static_cast<std::size_t>(((m % d) + d) % d);
}

void require_truncated(const DvrBasis& b, const char* what) {
    if (!is_truncated(b.kind()))
        throw ConfigError(std::string(what) + ": requires a truncated DVR, got " + std::string(to_string(b.kind())));
}

}  // namespace

std::string_view to_string(DvrKind k) noexcept {
    switch (k) {
        case DvrKind::TraditionalPhase: return "TraditionalPhase";
        case DvrKind::TraditionalCharge: return "TraditionalCharge";
        case DvrKind::TruncatedPhase: return "TruncatedPhase";
        case DvrKind::TruncatedCharge: return "TruncatedCharge";
    }
    return "?";
}

DvrKind parse_dvr_kind(std::string_view name) {
    for (auto k : {DvrKind::TraditionalPhase, DvrKind::TraditionalCharge, DvrKind::TruncatedPhase,
                   DvrKind::TruncatedCharge})
        if (name == to_string(k)) return k;
    throw ConfigError("kind: unknown DVR kind '" + std::string(name) + "'");
}

DvrBasis DvrBasis::make(DvrKind kind, Spacing spacing, std::int64_t M) {
    if (M < 0) throw ConfigError("M: must be nonnegative");
    spacing = Spacing::make(spacing.num, spacing.den, spacing.pi);
    if (is_phase(kind) && !spacing.pi)
        throw ConfigError("spacing: phase DVR spacings are multiples of pi (set \"pi\": true)");
    if (!is_phase(kind) && spacing.pi)
        throw ConfigError("spacing: charge DVR spacings are plain rationals (set \"pi\": false)");
    return DvrBasis(kind, spacing, M);
}

DvrBasis DvrBasis::with_conjugate_spacing(DvrKind kind, Spacing conjugate, std::int64_t M) {
    if (!is_truncated(kind))
        throw ConfigError("conjugate_spacing: only truncated DVRs have a discrete conjugate grid");
    if (M < 0) throw ConfigError("M: must be nonnegative");
    return make(kind, truncated_conjugate(conjugate, 2 * M + 1), M);
}

double DvrBasis::conjugate_bound() const noexcept { return kPi / step(); }

Spacing DvrBasis::conjugate_spacing() const {
    require_truncated(*this, "conjugate_spacing");
    return truncated_conjugate(spacing_, dim());
}

std::string DvrBasis::tag() const {
    return std::string(to_string(kind_)) + "(" + spacing_.to_string() + ",M=" + std::to_string(M_) + ")";
}

std::vector<double> grid_points(const DvrBasis& basis) {
    std::vector<double> x(static_cast<std::size_t>(basis.dim()));
    const double s = basis.step();
    for (Eigen::Index i = 0; i < basis.dim(); ++i)
        x[static_cast<std::size_t>(i)] = static_cast<double>(basis.alpha(i)) * s;
    return x;
}

OperatorMatrix diag_of_discretized(const DvrBasis& basis, const std::function<double(double)>& f) {
    const auto x = grid_points(basis);
    CMatrix m = CMatrix::Zero(basis.dim(), basis.dim());
    for (Eigen::Index i = 0; i < basis.dim(); ++i) {
        const double v = f(x[static_cast<std::size_t>(i)]);
        if (!std::isfinite(v))
            throw NumericalError("diag_of_discretized: non-finite value at grid point alpha=" +
                                 std::to_string(basis.alpha(i)));
        m(i, i) = v;
    }
    return {std::move(m), basis.tag()};
}

OperatorMatrix conj_moment_traditional(const DvrBasis& basis, int power) {
    if (is_truncated(basis.kind()))
        throw ConfigError("conj_moment_traditional: requires a traditional DVR");
    if (power != 1 && power != 2) throw ConfigError("conj_moment_traditional: power must be 1 or 2");

    const Eigen::Index d = basis.dim();
    const double s = basis.step();
    const double b = basis.conjugate_bound();
    // N = i d/dtheta in the phase DVR, theta = -i d/dN in the charge DVR.
    const cplx unit = is_phase(basis.kind()) ? cplx{0.0, 1.0} : cplx{0.0, -1.0};

    CMatrix m(d, d);
    for (Eigen::Index i = 0; i < d; ++i) {
        for (Eigen::Index j = 0; j < d; ++j) {
            if (i == j) {
                m(i, j) = power == 1 ? 0.0 : b * b / 3.0;
                continue;
            }
            const double k = static_cast<double>(i - j);
            const double sgn = ((i + j) % 2 == 0) ? 1.0 : -1.0;
            if (power == 1)
                m(i, j) = unit * (sgn / (s * k));
            else
                m(i, j) = 2.0 * sgn / (s * s * k * k);
        }
    }
    return {std::move(m), basis.tag()};
}

OperatorMatrix conjugate_function_truncated(const DvrBasis& basis, const std::function<double(double)>& g) {
    require_truncated(basis, "conjugate_function_truncated");
    const Eigen::Index d = basis.dim();
    const std::int64_t M = basis.M();
    const double dy = basis.conjugate_spacing().value();
    const double sign = dft_sign(basis.kind());

    std::vector<double> gv(static_cast<std::size_t>(d));
    for (std::int64_t n = -M; n <= M; ++n) {
        const double v = g(static_cast<double>(n) * dy);
        if (!std::isfinite(v)) throw NumericalError("conjugate_function_truncated: non-finite eigenvalue");
        gv[static_cast<std::size_t>(n + M)] = v;
    }
    auto gn = [&](std::int64_t n) { return gv[static_cast<std::size_t>(n + M)]; };

    // c_k = (1/d) sum_n g(y_n) exp(-sign i 2 pi n k / d), with the +-n terms
    // paired so that an even g yields exactly real c_k.
    const auto w = twiddles(d);
    std::vector<cplx> c(static_cast<std::size_t>(d));
    for (std::int64_t k = 0; k < d; ++k) {
        double re = gn(0);
        double im = 0.0;
        for (std::int64_t n = 1; n <= M; ++n) {
            const cplx e = w[wrap(n * k, d)];
            re += (gn(n) + gn(-n)) * e.real();
            im -= sign * (gn(n) - gn(-n)) * e.imag();
        }
        c[static_cast<std::size_t>(k)] = cplx{re, im} / static_cast<double>(d);
    }

    CMatrix m(d, d);
    for (Eigen::Index i = 0; i < d; ++i) {
        for (Eigen::Index j = 0; j < d; ++j) {
            const auto k = static_cast<std::size_t>(std::abs(i - j));
            m(i, j) = i >= j ? c[k] : std::conj(c[k]);
        }
    }
    return {std::move(m), basis.tag()};
}

OperatorMatrix conj_moment_truncated(const DvrBasis& basis, int power) {
    if (power != 1 && power != 2) throw ConfigError("conj_moment_truncated: power must be 1 or 2");
    if (power == 1) return conjugate_function_truncated(basis, [](double y) { return y; });
    return conjugate_function_truncated(basis, [](double y) { return y * y; });
}

CMatrix centered_dft_matrix(Eigen::Index dim, int sign) {
    if (dim <= 0 || dim % 2 == 0) throw ConfigError("centered_dft_matrix: dimension must be odd");
    const std::int64_t M = (dim - 1) / 2;
    const auto w = twiddles(dim);
    const double norm = 1.0 / std::sqrt(static_cast<double>(dim));
    CMatrix F(dim, dim);
    for (std::int64_t n = -M; n <= M; ++n)
        for (std::int64_t a = -M; a <= M; ++a)
            F(n + M, a + M) = w[wrap(sign * n * a, dim)] * norm;
    return F;
}

OperatorMatrix cosine_in_charge(const DvrBasis& basis, double A, int sign) {
    if (is_phase(basis.kind())) throw ConfigError("cosine_in_charge: requires a charge DVR");
    if (sign != 1 && sign != -1) throw ConfigError("cosine_in_charge: sign must be +1 or -1");
    if (!basis.spacing().reciprocal_is_integer())
        throw ConfigError("cosine_in_charge: 1/dN must be an integer (dN = " + basis.spacing().to_string() +
                          "); non-integer grids give a full matrix and are not supported");
    const Eigen::Index k = static_cast<Eigen::Index>(basis.spacing().den);
    const Eigen::Index d = basis.dim();
    const double phi = 2.0 * kPi * A * static_cast<double>(sign);
    const cplx up = 0.5 * cplx{std::cos(phi), std::sin(phi)};

    // <alpha| cos |beta> = e^{+i phi}/2 at alpha = beta - k, e^{-i phi}/2 at alpha = beta + k.
    // Grids with d <= k have no pair of states a tunneling step apart.
    CMatrix m = CMatrix::Zero(d, d);
    for (Eigen::Index i = 0; i + k < d; ++i) {
        m(i, i + k) = up;
        m(i + k, i) = std::conj(up);
    }
    return {std::move(m), basis.tag()};
}

OperatorMatrix sine_in_phase(const DvrBasis& basis, double A) {
    if (!is_phase(basis.kind())) throw ConfigError("sine_in_phase: requires a phase DVR");
    const double shift = 2.0 * kPi * A;
    return diag_of_discretized(basis, [shift](double t) { return std::sin(t + shift); });
}

double basis_function(const DvrBasis& basis, std::int64_t beta, double x) {
    const double s = basis.step();
    const double u = (x - static_cast<double>(beta) * s) / s;
    const double norm = 1.0 / std::sqrt(s);
    if (!is_truncated(basis.kind())) {
        if (u == 0.0) return norm;
        return norm * std::sin(kPi * u) / (kPi * u);
    }
    const double d = static_cast<double>(basis.dim());
    const double den = std::sin(kPi * u / d);
    if (std::abs(den) < 1e-9) {
        // Near a period boundary: fall back to the defining sum.
        double acc = 0.0;
        for (std::int64_t n = -basis.M(); n <= basis.M(); ++n)
            acc += std::cos(2.0 * kPi * static_cast<double>(n) * u / d);
        return norm * acc / d;
    }
    return norm * std::sin(kPi * u) / (d * den);
}

DvrSelfCheck dvr_selfcheck(const DvrBasis& basis, int fine_factor) {
    if (fine_factor < 4) throw ConfigError("dvr_selfcheck: fine_factor must be >= 4");
    const std::int64_t M = basis.M();
    const double s = basis.step();
    const double root_c = std::sqrt(basis.weight());
    DvrSelfCheck out;

    for (std::int64_t a = -M; a <= M; ++a) {
        for (std::int64_t b = -M; b <= M; ++b) {
            const double v = basis_function(basis, b, static_cast<double>(a) * s);
            out.interpolation_defect = std::max(out.interpolation_defect, std::abs(v - (a == b ? root_c : 0.0)));
        }
    }

    // Sample points x_k = k h. Truncated: one full period (trapezoid rule is exact
    // for the band-limited periodic kernel). Traditional: a finite window with
    // Shannon-sampling quadrature.
    const double h = s / fine_factor;
    std::int64_t k_lo = 0;
    std::int64_t k_hi = 0;
    if (is_truncated(basis.kind())) {
        const std::int64_t n = basis.dim() * fine_factor;
        k_lo = -(n / 2);
        k_hi = k_lo + n - 1;
    } else {
        constexpr std::int64_t kWindowCells = 4096;
        k_lo = -(M + kWindowCells) * fine_factor;
        k_hi = -k_lo;
    }
    const auto samples = static_cast<Eigen::Index>(k_hi - k_lo + 1);
    out.samples = samples;
    RMatrix psi(samples, basis.dim());
    for (Eigen::Index r = 0; r < samples; ++r) {
        const double x = static_cast<double>(k_lo + r) * h;
        for (std::int64_t b = -M; b <= M; ++b) psi(r, b + M) = basis_function(basis, b, x);
    }
    const RMatrix overlap = h * psi.transpose() * psi;
    out.overlap_defect = (overlap - RMatrix::Identity(basis.dim(), basis.dim())).cwiseAbs().maxCoeff();

    if (is_truncated(basis.kind())) {
        const double period = static_cast<double>(basis.dim()) * s;
        double defect = 0.0;
        for (Eigen::Index r = 0; r < samples; ++r) {
            const double x = static_cast<double>(k_lo + r) * h;
            for (std::int64_t b = -M; b <= M; ++b)
                defect = std::max(defect, std::abs(basis_function(basis, b, x + period) - psi(r, b + M)));
        }
        out.periodicity_defect = defect;
    }
    return out;
}

void to_json(nlohmann::json& j, const Spacing& s) {
    j = nlohmann::json{{"num", s.num}, {"den", s.den}, {"pi", s.pi}};
}

void from_json(const nlohmann::json& j, Spacing& s) {
    if (!j.is_object() || !j.contains("num") || !j.contains("den"))
        throw ConfigError("spacing: expected {\"num\": p, \"den\": q, \"pi\": bool}");
    if (!j["num"].is_number_integer() || !j["den"].is_number_integer())
        throw ConfigError("spacing: num and den must be integers");
    bool pi = false;
    if (j.contains("pi")) {
        if (!j["pi"].is_boolean()) throw ConfigError("spacing.pi: expected a boolean");
        pi = j["pi"].get<bool>();
    }
    s = Spacing::make(j["num"].get<std::int64_t>(), j["den"].get<std::int64_t>(), pi);
}

void to_json(nlohmann::json& j, const DvrBasis& b) {
    j = nlohmann::json{{"kind", std::string(to_string(b.kind()))}, {"spacing", b.spacing()}, {"M", b.M()}};
}

DvrBasis dvr_basis_from_json(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("kind") || !j.contains("spacing") || !j.contains("M"))
        throw ConfigError("basis: expected {\"kind\", \"spacing\", \"M\"}");
    if (!j["kind"].is_string()) throw ConfigError("basis.kind: expected a string");
    if (!j["M"].is_number_integer()) throw ConfigError("basis.M: expected an integer");
    return DvrBasis::make(parse_dvr_kind(j["kind"].get<std::string>()), j["spacing"].get<Spacing>(),
                          j["M"].get<std::int64_t>());
}

}  // namespace sincdvr
