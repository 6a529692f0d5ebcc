#include "sincdvr/spectra.hpp"

#include <lapacke.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>

#include "sincdvr/error.hpp"

namespace sincdvr {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};

const char* kPeriodicRationale =
    "the transmon potential is 2pi-periodic in phase, which forces integer charge; only the charge basis "
    "(dN = 1), the truncated phase DVR with dN = 1, and periodic finite differences respect that";

}  // namespace

DvrBasis DvrRepresentation::basis(Eigen::Index dim) const {
    if (dim < 1 || dim % 2 == 0) throw ConfigError("dvr: matrix size must be odd (2M+1), got " + std::to_string(dim));
    const std::int64_t M = (dim - 1) / 2;
    return conjugate ? DvrBasis::with_conjugate_spacing(kind, spacing, M) : DvrBasis::make(kind, spacing, M);
}

std::string rep_kind(const Representation& rep) {
    return std::visit(overloaded{
                          [](const DvrRepresentation& r) { return std::string(to_string(r.kind)); },
                          [](const HoRepresentation&) { return std::string("HO"); },
                          [](const FdRepresentation&) { return std::string("FD"); },
                          [](const ChargeBasisRepresentation&) { return std::string("ChargeBasis"); },
                      },
                      rep);
}

std::string describe(const Representation& rep) {
    return std::visit(
        overloaded{
            [](const DvrRepresentation& r) {
                const std::string var = is_phase(r.kind) != r.conjugate ? "dtheta=" : "dN=";
                return std::string(to_string(r.kind)) + "(" + var + r.spacing.to_string() + ")";
            },
            [](const HoRepresentation& r) { return "HO(" + std::string(to_string(r.scale)) + ")"; },
            [](const FdRepresentation& r) {
                return "FD(" + (r.spacing ? r.spacing->to_string() : std::string("periodic")) +
                       ",M=" + std::to_string(r.order) + ")";
            },
            [](const ChargeBasisRepresentation&) { return std::string("ChargeBasis"); },
        },
        rep);
}

std::optional<Spacing> rep_spacing(const Representation& rep) {
    return std::visit(overloaded{
                          [](const DvrRepresentation& r) -> std::optional<Spacing> { return r.spacing; },
                          [](const HoRepresentation&) -> std::optional<Spacing> { return std::nullopt; },
                          [](const FdRepresentation& r) -> std::optional<Spacing> { return r.spacing; },
                          [](const ChargeBasisRepresentation&) -> std::optional<Spacing> {
                              return Spacing{1, 1, false};
                          },
                      },
                      rep);
}

void check_compatible(const CircuitSpec& spec, const Representation& rep) {
    spec.validate();
    const bool transmon = spec.family == CircuitFamily::Transmon;
    std::visit(
        overloaded{
            [&](const DvrRepresentation& r) {
                if (r.conjugate && !is_truncated(r.kind))
                    throw ConfigError("representation: conjugate_spacing only applies to truncated DVRs");
                // The conjugate spacing of a phase kind is a charge spacing and vice versa.
                const bool pi_expected = is_phase(r.kind) != r.conjugate;
                if (r.spacing.pi != pi_expected)
                    throw ConfigError("representation: " + describe(rep) + " has a spacing of the wrong variable");
                const bool charge_grid = !is_phase(r.kind);
                if (transmon) {
                    const Spacing one{1, 1, false};
                    const bool ok = (r.kind == DvrKind::TraditionalCharge && !r.conjugate && r.spacing == one) ||
                                    (r.kind == DvrKind::TruncatedPhase && r.conjugate && r.spacing == one);
                    if (!ok) throw ConfigError("representation " + describe(rep) + " rejected: " + kPeriodicRationale);
                    return;
                }
                if (spec.family == CircuitFamily::Fluxonium && charge_grid && !r.spacing.reciprocal_is_integer())
                    throw ConfigError("representation " + describe(rep) +
                                      " rejected: the cosine term in a charge DVR needs integer 1/dN");
            },
            [&](const HoRepresentation& r) {
                if (transmon) throw ConfigError("representation HO rejected: the transmon has no inductive term");
                if (spec.family == CircuitFamily::LC && r.scale == LengthScale::Plasma)
                    throw ConfigError("representation HO(Plasma) rejected: LC circuits have no plasma frequency");
                if (r.embed_dim < 1) throw ConfigError("representation HO: embed_dim must be >= 1");
            },
            [&](const FdRepresentation& r) {
                if (r.order < 1) throw ConfigError("representation FD: order must be >= 1");
                if (transmon && r.spacing)
                    throw ConfigError("representation FD rejected: periodic transmon grids take spacing 2pi/dim, "
                                      "omit \"spacing\"");
                if (!transmon && !r.spacing) throw ConfigError("representation FD: bounded grids need a spacing");
                if (r.spacing && !r.spacing->pi) throw ConfigError("representation FD: phase spacing must carry pi");
            },
            [&](const ChargeBasisRepresentation&) {},
        },
        rep);
}

void check_dimension(const Representation& rep, Eigen::Index dim) {
    if (std::holds_alternative<HoRepresentation>(rep)) {
        const auto& r = std::get<HoRepresentation>(rep);
        if (dim < 1) throw ConfigError("HO: matrix size must be >= 1");
        if (dim > r.embed_dim) throw ConfigError("HO: matrix size exceeds embed_dim");
        return;
    }
    if (dim < 1 || dim % 2 == 0)
        throw ConfigError(describe(rep) + ": matrix size must be odd, got " + std::to_string(dim));
    if (const auto* fd = std::get_if<FdRepresentation>(&rep); fd && 2 * fd->order + 1 > dim)
        throw ConfigError(describe(rep) + ": stencil of order " + std::to_string(fd->order) +
                          " needs matrix size >= " + std::to_string(2 * fd->order + 1) + ", got " + std::to_string(dim));
}

namespace {

OperatorMatrix dvr_term(const DvrBasis& basis, const HamiltonianTerm& t) {
    const bool phase = is_phase(basis.kind());
    const bool truncated = is_truncated(basis.kind());
    const double s = t.shift;
    switch (t.kind) {
        case OperatorKind::ThetaSquared:
            if (phase) return diag_of_discretized(basis, [](double x) { return x * x; });
            return truncated ? conj_moment_truncated(basis, 2) : conj_moment_traditional(basis, 2);
        case OperatorKind::NSquared:
            if (!phase) return diag_of_discretized(basis, [](double x) { return x * x; });
            return truncated ? conj_moment_truncated(basis, 2) : conj_moment_traditional(basis, 2);
        case OperatorKind::NShiftedSquared: {
            if (!phase) return diag_of_discretized(basis, [s](double x) { return (x - s) * (x - s); });
            if (truncated) return conjugate_function_truncated(basis, [s](double y) { return (y - s) * (y - s); });
            OperatorMatrix m = conj_moment_traditional(basis, 2);
            m.entries += -2.0 * s * conj_moment_traditional(basis, 1).entries;
            m.entries += s * s * CMatrix::Identity(basis.dim(), basis.dim());
            return m;
        }
        case OperatorKind::CosTheta: {
            if (!phase) return cosine_in_charge(basis, s, +1);
            const double shift = 2.0 * std::numbers::pi * s;
            return diag_of_discretized(basis, [shift](double x) { return std::cos(x + shift); });
        }
    }
    throw ConfigError("unknown operator kind");
}

OperatorMatrix ho_term(const HoBasis& basis, const HamiltonianTerm& t) {
    switch (t.kind) {
        case OperatorKind::NSquared: return ho_n_squared(basis);
        case OperatorKind::ThetaSquared: return ho_theta_squared(basis);
        case OperatorKind::CosTheta: return cos_in_ho(basis, t.shift);
        case OperatorKind::NShiftedSquared: break;
    }
    throw ConfigError("HO basis: offset-charge terms are not supported");
}

template <class TermFn>
OperatorMatrix sum_terms(const CircuitSpec& spec, Eigen::Index dim, std::string tag, TermFn&& term) {
    OperatorMatrix h{CMatrix::Zero(dim, dim), std::move(tag)};
    for (const auto& t : terms(spec)) h.entries += t.coefficient * term(t).entries;
    return h;
}

}  // namespace

OperatorMatrix assemble(const CircuitSpec& spec, const Representation& rep, Eigen::Index dim) {
    check_compatible(spec, rep);
    check_dimension(rep, dim);
    return std::visit(
        overloaded{
            [&](const DvrRepresentation& r) {
                const DvrBasis basis = r.basis(dim);
                return sum_terms(spec, dim, basis.tag(), [&](const HamiltonianTerm& t) { return dvr_term(basis, t); });
            },
            [&](const ChargeBasisRepresentation&) {
                const DvrBasis basis = DvrBasis::make(DvrKind::TraditionalCharge, Spacing{1, 1, false}, (dim - 1) / 2);
                return sum_terms(spec, dim, "ChargeBasis", [&](const HamiltonianTerm& t) { return dvr_term(basis, t); });
            },
            [&](const HoRepresentation& r) {
                const HoBasis basis{length_scale(spec, r.scale), dim, r.embed_dim};
                return sum_terms(spec, dim, basis.tag(), [&](const HamiltonianTerm& t) { return ho_term(basis, t); });
            },
            [&](const FdRepresentation& r) {
                const std::int64_t half = (dim - 1) / 2;
                FdGrid grid = r.spacing ? FdGrid{r.spacing->value(), half, r.order, FdBoundary::Bounded}
                                        : FdGrid::periodic(half, r.order);
                return fd_hamiltonian(spec, grid);
            },
        },
        rep);
}

namespace {

bool is_tridiagonal(const CMatrix& m) {
    for (Eigen::Index j = 0; j < m.cols(); ++j)
        for (Eigen::Index i = 0; i < m.rows(); ++i)
            if ((i > j + 1 || j > i + 1) && m(i, j) != cplx{0.0, 0.0}) return false;
    return true;
}

}  // namespace

Spectrum eigensolve(const OperatorMatrix& h, Eigen::Index k, bool vectors) {
    const Eigen::Index n = h.dim();
    if (n == 0 || k < 1 || k > n) throw ConfigError("eigensolve: need 1 <= k <= dim");
    const double scale = std::max(h.max_abs(), 1e-300);
    if (!h.entries.allFinite()) throw NumericalError("eigensolve: matrix has non-finite entries");
    if (h.hermiticity_defect() > 1e-10 * scale) throw NumericalError("eigensolve: matrix is not Hermitian");

    const char jobz = vectors ? 'V' : 'N';
    const auto N = static_cast<lapack_int>(n);
    const auto K = static_cast<lapack_int>(k);
    lapack_int found = 0;
    std::vector<lapack_int> support(2 * static_cast<std::size_t>(n));
    Spectrum out;
    out.dim = n;
    RVector w(n);

    if (h.is_real() && !vectors && is_tridiagonal(h.entries)) {
        const RMatrix a = h.entries.real();
        out.energies = tridiagonal_eigenvalues(a.diagonal(), a.diagonal(-1), k);
        return out;
    }
    if (h.is_real()) {
        RMatrix a = h.entries.real();
        RMatrix z(n, vectors ? k : 1);
        const lapack_int info = LAPACKE_dsyevr(LAPACK_COL_MAJOR, jobz, 'I', 'L', N, a.data(), N, 0.0, 0.0, 1, K, 0.0,
                                               &found, w.data(), z.data(), N, support.data());
        if (info != 0 || found != K) throw NumericalError("eigensolve: dsyevr failed (info=" + std::to_string(info) + ")");
        if (vectors) out.eigvectors = z.cast<cplx>();
    } else {
        CMatrix a = h.entries;
        CMatrix z(n, vectors ? k : 1);
        const lapack_int info =
            LAPACKE_zheevr(LAPACK_COL_MAJOR, jobz, 'I', 'L', N, reinterpret_cast<lapack_complex_double*>(a.data()), N,
                           0.0, 0.0, 1, K, 0.0, &found, w.data(), reinterpret_cast<lapack_complex_double*>(z.data()), N,
                           support.data());
        if (info != 0 || found != K) throw NumericalError("eigensolve: zheevr failed (info=" + std::to_string(info) + ")");
        if (vectors) out.eigvectors = std::move(z);
    }
    out.energies = w.head(k);
    return out;
}

RVector tridiagonal_eigenvalues(const RVector& diag, const RVector& offdiag, Eigen::Index k) {
    const Eigen::Index n = diag.size();
    if (offdiag.size() != std::max<Eigen::Index>(n - 1, 0)) throw ConfigError("tridiagonal: size mismatch");
    if (k < 1 || k > n) throw ConfigError("tridiagonal: need 1 <= k <= n");
    RVector d = diag;
    RVector e = offdiag;
    RVector w(n);
    std::vector<lapack_int> iblock(static_cast<std::size_t>(n));
    std::vector<lapack_int> isplit(static_cast<std::size_t>(n));
    lapack_int m = 0;
    lapack_int nsplit = 0;
    const double abstol = 2.0 * LAPACKE_dlamch('S');
    const lapack_int info =
        LAPACKE_dstebz('I', 'E', static_cast<lapack_int>(n), 0.0, 0.0, 1, static_cast<lapack_int>(k), abstol, d.data(),
                       e.data(), &m, &nsplit, w.data(), iblock.data(), isplit.data());
    if (info != 0 || m != k) throw NumericalError("tridiagonal: dstebz failed (info=" + std::to_string(info) + ")");
    return w.head(k);
}

RVector transmon_charge_oracle(const CircuitSpec& spec, Eigen::Index dim, Eigen::Index levels) {
    if (spec.family != CircuitFamily::Transmon) throw ConfigError("transmon oracle: needs a transmon spec");
    if (dim < 1 || dim % 2 == 0) throw ConfigError("transmon oracle: size must be odd");
    const std::int64_t M = (dim - 1) / 2;
    RVector diag(dim);
    for (std::int64_t a = -M; a <= M; ++a) {
        const double q = static_cast<double>(a) - *spec.N_g;
        diag(a + M) = 4.0 * spec.E_C * q * q;
    }
    const RVector off = RVector::Constant(std::max<Eigen::Index>(dim - 1, 0), -0.5 * *spec.E_J);
    return tridiagonal_eigenvalues(diag, off, std::min(levels, dim));
}

RVector fluxonium_ho_oracle(const CircuitSpec& spec, Eigen::Index dim, Eigen::Index embed_dim, Eigen::Index levels) {
    if (spec.family != CircuitFamily::Fluxonium) throw ConfigError("fluxonium oracle: needs a fluxonium spec");
    const OperatorMatrix h = assemble(spec, HoRepresentation{LengthScale::LC, embed_dim}, dim);
    return eigensolve(h, std::min(levels, dim), false).energies;
}

double reference_energy(const CircuitSpec& spec, int level) {
    spec.validate();
    if (level < 0) throw ConfigError("reference_energy: level must be >= 0");
    if (spec.family == CircuitFamily::LC)
        return std::sqrt(8.0 * spec.E_C * *spec.E_L) * (static_cast<double>(level) + 0.5);

    constexpr Eigen::Index kCachedLevels = 32;
    if (level >= kCachedLevels) throw ConfigError("reference_energy: level beyond the memoized range");
    static std::mutex mu;
    static std::map<std::string, RVector> cache;
    const std::string key = nlohmann::json(spec).dump();
    {
        std::lock_guard lock(mu);
        if (auto it = cache.find(key); it != cache.end()) return it->second(level);
    }
    RVector levels = spec.family == CircuitFamily::Fluxonium
                         ? fluxonium_ho_oracle(spec, kFluxoniumReferenceDim, kFluxoniumReferenceDim, kCachedLevels)
                         : transmon_charge_oracle(spec, kTransmonReferenceDim, kCachedLevels);
    std::lock_guard lock(mu);
    return cache.emplace(key, std::move(levels)).first->second(level);
}

void to_json(nlohmann::json& j, const Representation& rep) {
    std::visit(overloaded{
                   [&](const DvrRepresentation& r) {
                       j = nlohmann::json{{"type", "dvr"}, {"kind", std::string(to_string(r.kind))}};
                       j[r.conjugate ? "conjugate_spacing" : "spacing"] = r.spacing;
                   },
                   [&](const HoRepresentation& r) {
                       j = nlohmann::json{{"type", "ho"},
                                          {"length_scale", std::string(to_string(r.scale))},
                                          {"embed_dim", r.embed_dim}};
                   },
                   [&](const FdRepresentation& r) {
                       j = nlohmann::json{{"type", "fd"}, {"order", r.order}};
                       if (r.spacing) j["spacing"] = *r.spacing;
                   },
                   [&](const ChargeBasisRepresentation&) { j = nlohmann::json{{"type", "charge_basis"}}; },
               },
               rep);
}

Representation representation_from_json(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("type") || !j["type"].is_string())
        throw ConfigError("representation: expected an object with a string \"type\"");
    const std::string type = j["type"].get<std::string>();
    auto allow = [&j](std::initializer_list<std::string_view> keys) {
        for (const auto& [key, value] : j.items()) {
            if (key == "type") continue;
            if (std::find(keys.begin(), keys.end(), key) == keys.end())
                throw ConfigError("representation." + key + ": unknown field");
        }
    };
    if (type == "dvr") {
        allow({"kind", "spacing", "conjugate_spacing"});
        if (!j.contains("kind") || !j["kind"].is_string()) throw ConfigError("representation.kind: required string");
        DvrRepresentation r;
        r.kind = parse_dvr_kind(j["kind"].get<std::string>());
        const bool has_s = j.contains("spacing");
        const bool has_c = j.contains("conjugate_spacing");
        if (has_s == has_c)
            throw ConfigError("representation: give exactly one of \"spacing\" or \"conjugate_spacing\"");
        r.conjugate = has_c;
        r.spacing = (has_c ? j["conjugate_spacing"] : j["spacing"]).get<Spacing>();
        return r;
    }
    if (type == "ho") {
        allow({"length_scale", "embed_dim"});
        HoRepresentation r;
        if (j.contains("length_scale")) {
            if (!j["length_scale"].is_string()) throw ConfigError("representation.length_scale: expected a string");
            r.scale = parse_length_scale(j["length_scale"].get<std::string>());
        }
        if (j.contains("embed_dim")) {
            if (!j["embed_dim"].is_number_integer()) throw ConfigError("representation.embed_dim: expected an integer");
            r.embed_dim = j["embed_dim"].get<Eigen::Index>();
        }
        return r;
    }
    if (type == "fd") {
        allow({"spacing", "order"});
        FdRepresentation r;
        if (j.contains("spacing")) r.spacing = j["spacing"].get<Spacing>();
        if (j.contains("order")) {
            if (!j["order"].is_number_integer()) throw ConfigError("representation.order: expected an integer");
            r.order = j["order"].get<int>();
        }
        return r;
    }
    if (type == "charge_basis") {
        allow({});
        return ChargeBasisRepresentation{};
    }
    throw ConfigError("representation.type: unknown type '" + type + "' (dvr, ho, fd, charge_basis)");
}

}  // namespace sincdvr
