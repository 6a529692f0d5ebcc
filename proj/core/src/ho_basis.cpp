#include "sincdvr/ho_basis.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <tuple>
#include <utility>

#include "sincdvr/error.hpp"

namespace sincdvr {

std::string_view to_string(LengthScale s) noexcept {
    return s == LengthScale::LC ? "LC" : "Plasma";
}

LengthScale parse_length_scale(std::string_view name) {
    if (name == "LC") return LengthScale::LC;
    if (name == "Plasma") return LengthScale::Plasma;
    throw ConfigError("length_scale: expected LC or Plasma, got '" + std::string(name) + "'");
}

double length_scale(const CircuitSpec& spec, LengthScale which) {
    spec.validate();
    if (spec.family == CircuitFamily::Transmon)
        throw ConfigError("length_scale: the oscillator basis needs an inductive term (transmon has none)");
    const double E_L = *spec.E_L;
    if (which == LengthScale::LC) return std::pow(8.0 * spec.E_C / E_L, 0.25);
    if (!spec.E_J) throw ConfigError("length_scale: plasma length scale needs E_J");
    return std::sqrt(std::sqrt(8.0 * spec.E_C * *spec.E_J) / E_L);
}

void HoBasis::validate() const {
    if (!(theta0 > 0.0) || !std::isfinite(theta0)) throw ConfigError("ho.theta0: must be finite and > 0");
    if (dim < 1) throw ConfigError("ho.dim: must be >= 1");
    if (embed_dim < dim) throw ConfigError("ho.embed_dim: must be >= dim");
}

std::string HoBasis::tag() const {
    return "HO(theta0=" + std::to_string(theta0) + ",embed=" + std::to_string(embed_dim) + ")";
}

HoOperators ho_operators(const HoBasis& basis) {
    basis.validate();
    const Eigen::Index d = basis.dim;
    CMatrix theta = CMatrix::Zero(d, d);
    CMatrix n = CMatrix::Zero(d, d);
    const double tc = basis.theta0 / std::numbers::sqrt2;
    const double nc = 1.0 / (std::numbers::sqrt2 * basis.theta0);
    for (Eigen::Index m = 0; m + 1 < d; ++m) {
        const double r = std::sqrt(static_cast<double>(m + 1));
        theta(m, m + 1) = theta(m + 1, m) = tc * r;
        // N = i/(sqrt2 theta0) (a^+ - a): <m|N|m+1> = -i r nc, <m+1|N|m> = +i r nc
        n(m, m + 1) = cplx{0.0, -nc * r};
        n(m + 1, m) = cplx{0.0, nc * r};
    }
    return {{std::move(theta), basis.tag()}, {std::move(n), basis.tag()}};
}

namespace {

// Leading block of (a^+ + s a)^2 for s = +-1: diag s(2m+1), offsets +-2 sqrt((m+1)(m+2)).
CMatrix quadrature_squared(Eigen::Index d, double diag_sign) {
    CMatrix q = CMatrix::Zero(d, d);
    for (Eigen::Index m = 0; m < d; ++m) {
        q(m, m) = diag_sign * (2.0 * static_cast<double>(m) + 1.0);
        if (m + 2 < d) {
            const double v = std::sqrt(static_cast<double>((m + 1) * (m + 2)));
            q(m, m + 2) = q(m + 2, m) = v;
        }
    }
    return q;
}

}  // namespace

OperatorMatrix ho_theta_squared(const HoBasis& basis) {
    basis.validate();
    const double c = basis.theta0 * basis.theta0 / 2.0;
    return {c * quadrature_squared(basis.dim, 1.0), basis.tag()};
}

OperatorMatrix ho_n_squared(const HoBasis& basis) {
    basis.validate();
    // N^2 = -(a^+ - a)^2 / (2 theta0^2); (a^+ - a)^2 has diag -(2m+1), offsets +sqrt(..).
    const double c = -1.0 / (2.0 * basis.theta0 * basis.theta0);
    return {c * quadrature_squared(basis.dim, -1.0), basis.tag()};
}

namespace {

struct EmbeddedTheta {
    RVector eigenvalues;
    RMatrix eigenvectors;
};

std::shared_ptr<const EmbeddedTheta> embedded_theta(double theta0, Eigen::Index embed_dim) {
    static std::mutex mu;
    static std::map<std::pair<double, Eigen::Index>, std::shared_ptr<const EmbeddedTheta>> cache;
    const auto key = std::make_pair(theta0, embed_dim);
    {
        std::lock_guard lock(mu);
        if (auto it = cache.find(key); it != cache.end()) return it->second;
    }
    RVector diag = RVector::Zero(embed_dim);
    RVector sub(std::max<Eigen::Index>(embed_dim - 1, 0));
    for (Eigen::Index m = 0; m + 1 < embed_dim; ++m)
        sub(m) = theta0 / std::numbers::sqrt2 * std::sqrt(static_cast<double>(m + 1));
    Eigen::SelfAdjointEigenSolver<RMatrix> solver;
    solver.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
    if (solver.info() != Eigen::Success) throw NumericalError("cos_in_ho: tridiagonal eigensolver failed");
    auto entry = std::make_shared<const EmbeddedTheta>(EmbeddedTheta{solver.eigenvalues(), solver.eigenvectors()});
    std::lock_guard lock(mu);
    return cache.emplace(key, std::move(entry)).first->second;
}

std::shared_ptr<const RMatrix> embedded_cos(double theta0, Eigen::Index embed_dim, double A) {
    static std::mutex mu;
    static std::map<std::tuple<double, Eigen::Index, double>, std::shared_ptr<const RMatrix>> cache;
    const auto key = std::make_tuple(theta0, embed_dim, A);
    {
        std::lock_guard lock(mu);
        if (auto it = cache.find(key); it != cache.end()) return it->second;
    }
    const auto emb = embedded_theta(theta0, embed_dim);
    const double shift = 2.0 * std::numbers::pi * A;
    const RVector f = (emb->eigenvalues.array() + shift).cos().matrix();
    const RMatrix full = emb->eigenvectors * f.asDiagonal() * emb->eigenvectors.transpose();
    // Symmetrize away the rounding asymmetry of the product.
    auto entry = std::make_shared<const RMatrix>(0.5 * (full + full.transpose()));
    std::lock_guard lock(mu);
    return cache.emplace(key, std::move(entry)).first->second;
}

}  // namespace

OperatorMatrix cos_in_ho(const HoBasis& basis, double A) {
    basis.validate();
    const auto full = embedded_cos(basis.theta0, basis.embed_dim, A);
    return {full->topLeftCorner(basis.dim, basis.dim).cast<cplx>(), basis.tag()};
}

}  // namespace sincdvr
