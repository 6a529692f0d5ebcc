/// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit when any fails.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "sincdvr/commands.hpp"
#include "sincdvr/fdm.hpp"
#include "sincdvr/states.hpp"

#include "extended_oracle.hpp"

using namespace sincdvr;

namespace {

constexpr double kPi = std::numbers::pi;

struct Outcome {
    bool pass = false;
    std::string detail;
};

class Suite {
public:
    void run(int id, const char* name, double budget_s, const std::function<Outcome()>& body) {
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = body();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (budget_s > 0 && s > budget_s) {
            o.pass = false;
            o.detail += "; over time budget of " + format_number(budget_s) + " s";
        }
        std::printf("[%s] %d %s: %s (%.1f s)\n", o.pass ? "PASS" : "FAIL", id, name, o.detail.c_str(), s);
        std::fflush(stdout);
        failures_ += o.pass ? 0 : 1;
    }
    [[nodiscard]] int failures() const { return failures_; }

private:
    int failures_ = 0;
};

std::string r_text(const std::optional<std::int64_t>& r) { return r ? std::to_string(*r) : "none"; }

/// Rows of a single-level metrics run, aligned with the representation list.
struct Table {
    std::vector<Representation> reps;
    std::vector<MetricsRow> rows;
    double threshold = 0.0;
};

Table metrics_for(const RunConfig& cfg, const std::function<bool(const Representation&)>& keep) {
    Table t;
    std::vector<std::vector<std::int64_t>> sizes;
    for (std::size_t i = 0; i < cfg.representations.size(); ++i) {
        if (!keep(cfg.representations[i].rep)) continue;
        t.reps.push_back(cfg.representations[i].rep);
        sizes.push_back(cfg.sizes_for(i));
    }
    t.rows = run_metrics(cfg, t.reps, sizes, {0}, 0);
    t.threshold = cfg.curve_threshold();
    return t;
}

const DvrRepresentation* as_dvr(const Representation& r) { return std::get_if<DvrRepresentation>(&r); }

/// Largest spacing of the given kind whose curve reaches the threshold.
std::optional<Spacing> largest_reaching(const Table& t, DvrKind kind) {
    std::optional<Spacing> best;
    for (std::size_t i = 0; i < t.reps.size(); ++i) {
        const auto* d = as_dvr(t.reps[i]);
        if (!d || d->kind != kind || !t.rows[i].metrics.R) continue;
        if (!best || d->spacing.value() > best->value()) best = d->spacing;
    }
    return best;
}

const MetricsRow* find_row(const Table& t, DvrKind kind, const Spacing& s) {
    for (std::size_t i = 0; i < t.reps.size(); ++i) {
        const auto* d = as_dvr(t.reps[i]);
        if (d && d->kind == kind && d->spacing == s) return &t.rows[i];
    }
    return nullptr;
}

std::string spacing_text(const std::optional<Spacing>& s) { return s ? s->to_string() : "none"; }

bool near_R(const std::optional<std::int64_t>& r, std::int64_t want, std::int64_t tol) {
    return r && std::llabs(*r - want) <= tol;
}

}  // namespace

int main() {
    Suite suite;
    const auto lc = CircuitSpec::lc(1, 1);
    const auto lc_sizes = odd_sizes(3, 301, 2);
    ConvergenceCurve quarter;

    suite.run(1, "LC exactness", 60, [&] {
        const double thr = default_threshold(lc, CurveScale::LcScaled);
        quarter = sweep(lc, DvrRepresentation{DvrKind::TraditionalCharge, Spacing::make(1, 4), false}, lc_sizes, 0,
                        {CurveScale::LcScaled, 0});
        const auto flat = sweep(lc, DvrRepresentation{DvrKind::TraditionalCharge, Spacing::make(3, 2), false},
                                lc_sizes, 0, {CurveScale::LcScaled, 0});
        const auto r_quarter = decoherence_R(quarter, thr);
        const auto r_flat = decoherence_R(flat, thr);
        const auto p_flat = saturation_P(flat, plateau_for(lc, CurveScale::LcScaled));
        return Outcome{r_quarter && !r_flat && p_flat.saturated,
                       "dN=1/4 R=" + r_text(r_quarter) + ", dN=3/2 R=" + r_text(r_flat) + " flat at P=" +
                           format_number(p_flat.P)};
    });

    const RunConfig lc_cfg = preset("lc");
    Table lc_dvr;
    suite.run(2, "LC cutoffs", 0, [&] {
        lc_dvr = metrics_for(lc_cfg, [](const Representation& r) { return as_dvr(r) != nullptr; });
        const auto tc = largest_reaching(lc_dvr, DvrKind::TraditionalCharge);
        const auto uc = largest_reaching(lc_dvr, DvrKind::TruncatedCharge);
        const auto tp = largest_reaching(lc_dvr, DvrKind::TraditionalPhase);
        const auto up = largest_reaching(lc_dvr, DvrKind::TruncatedPhase);
        const Spacing charge_cut = Spacing::make(9, 20);
        const Spacing phase_cut = Spacing::make(1, 3, true);
        return Outcome{tc == charge_cut && uc == charge_cut && tp == phase_cut && up == phase_cut,
                       "charge " + spacing_text(tc) + " and " + spacing_text(uc) + ", phase " + spacing_text(tp) +
                           " and " + spacing_text(up) + " (traditional and truncated)"};
    });

    suite.run(3, "LC FDM", 0, [&] {
        const auto fd = metrics_for(lc_cfg, [](const Representation& r) {
            const auto* f = std::get_if<FdRepresentation>(&r);
            return f && f->order == 1;
        });
        int reaching = 0;
        std::string which;
        std::optional<std::int64_t> r;
        for (std::size_t i = 0; i < fd.rows.size(); ++i) {
            if (!fd.rows[i].metrics.R) continue;
            ++reaching;
            r = fd.rows[i].metrics.R;
            which = spacing_text(fd.rows[i].spacing);
        }
        return Outcome{reaching == 1 && near_R(r, 499, 2),
                       std::to_string(reaching) + " of " + std::to_string(fd.rows.size()) +
                           " grids reach, at dtheta=" + which + " with R=" + r_text(r)};
    });

    const RunConfig fl_cfg = preset("fluxonium");
    Table fl;
    suite.run(4, "Fluxonium R", 300, [&] {
        fl = metrics_for(fl_cfg, [](const Representation&) { return true; });
        std::optional<std::int64_t> ho_lc, ho_plasma, best;
        std::string best_at;
        for (std::size_t i = 0; i < fl.reps.size(); ++i) {
            const auto& m = fl.rows[i].metrics;
            if (const auto* h = std::get_if<HoRepresentation>(&fl.reps[i]))
                (h->scale == LengthScale::LC ? ho_lc : ho_plasma) = m.R;
            // Only grids that stay decoherence accurate count; transient dips near a zero crossing do not.
            if (as_dvr(fl.reps[i]) && m.R && m.P < fl.threshold && (!best || *m.R < *best)) {
                best = m.R;
                best_at = describe(fl.reps[i]);
            }
        }
        const auto* p = find_row(fl, DvrKind::TraditionalPhase, Spacing::make(5, 32, true));
        const auto* q = find_row(fl, DvrKind::TraditionalCharge, Spacing::make(1, 5));
        const bool beats_ho = p && q && p->metrics.R && q->metrics.R && ho_lc && *p->metrics.R < *ho_lc &&
                              *q->metrics.R < *ho_lc;
        return Outcome{near_R(ho_lc, 47, 2) && near_R(ho_plasma, 209, 4) && near_R(best, 31, 2) && beats_ho,
                       "HO(LC) R=" + r_text(ho_lc) + ", HO(plasma) R=" + r_text(ho_plasma) + ", best DVR R=" +
                           r_text(best) + " at " + best_at + ", 5pi/32 R=" + r_text(p ? p->metrics.R : std::nullopt) +
                           ", 1/5 R=" + r_text(q ? q->metrics.R : std::nullopt)};
    });

    suite.run(5, "Fluxonium cutoffs", 0, [&] {
        if (fl.rows.empty()) return Outcome{false, "fluxonium metrics unavailable"};
        const auto tc = largest_reaching(fl, DvrKind::TraditionalCharge);
        const auto uc = largest_reaching(fl, DvrKind::TruncatedCharge);
        const auto tp = largest_reaching(fl, DvrKind::TraditionalPhase);
        const auto up = largest_reaching(fl, DvrKind::TruncatedPhase);
        const Spacing quarter_n = Spacing::make(1, 4);
        const Spacing wide = Spacing::make(1, 4, true);
        const Spacing narrow = Spacing::make(7, 32, true);
        const bool charge_ok = tc == quarter_n && uc == quarter_n;
        // One phase kind stops at 7pi/32; the other still touches pi/4 only because it saturates barely above.
        bool phase_ok = false;
        if (tp && up) {
            const bool trad_wide = *tp == wide && *up == narrow;
            const bool trunc_wide = *up == wide && *tp == narrow;
            const DvrKind wide_kind = trad_wide ? DvrKind::TraditionalPhase : DvrKind::TruncatedPhase;
            const auto* w = find_row(fl, wide_kind, wide);
            phase_ok = (trad_wide || trunc_wide) && w && w->metrics.P >= fl.threshold &&
                       w->metrics.P < 10 * fl.threshold;
        }
        const auto* tw = find_row(fl, DvrKind::TraditionalPhase, wide);
        return Outcome{charge_ok && phase_ok,
                       "charge " + spacing_text(tc) + " and " + spacing_text(uc) + ", phase " + spacing_text(tp) +
                           " and " + spacing_text(up) + " (traditional and truncated), traditional pi/4 P=" +
                           format_number(tw ? tw->metrics.P : 0.0)};
    });

    suite.run(6, "Transmon R", 10, [&] {
        std::string text;
        bool ok = true;
        for (const auto& [name, want] : {std::pair<const char*, std::int64_t>{"transmon-cl", 7}, {"transmon-tl", 15}}) {
            const auto t = metrics_for(preset(name), [](const Representation& r) {
                return std::holds_alternative<ChargeBasisRepresentation>(r) || as_dvr(r) != nullptr;
            });
            text += std::string(text.empty() ? "" : "; ") + name + ":";
            for (std::size_t i = 0; i < t.rows.size(); ++i) {
                ok = ok && t.rows[i].metrics.R == want;
                text += " " + t.rows[i].rep_kind + " R=" + r_text(t.rows[i].metrics.R);
            }
            ok = ok && t.rows.size() == 2;
        }
        return Outcome{ok, text};
    });

    suite.run(7, "Property suite", 0, [&] {
        std::vector<std::string> failed;
        auto check = [&](bool ok, const std::string& what) {
            if (!ok) failed.push_back(what);
        };

        double interp = 0.0;
        for (DvrKind k : {DvrKind::TraditionalPhase, DvrKind::TruncatedPhase, DvrKind::TraditionalCharge,
                          DvrKind::TruncatedCharge}) {
            const Spacing s = is_phase(k) ? Spacing::make(1, 8, true) : Spacing::make(1, 5);
            for (std::int64_t M : {1, 5, 12}) interp = std::max(interp, dvr_selfcheck(DvrBasis::make(k, s, M), 8).interpolation_defect);
        }
        check(interp < 1e-12, "interpolation defect " + format_number(interp));

        const std::vector<std::pair<CircuitSpec, Representation>> hams = {
            {lc, DvrRepresentation{DvrKind::TruncatedCharge, Spacing::make(1, 4), false}},
            {lc, FdRepresentation{Spacing::make(1, 16, true), 3}},
            {CircuitSpec::fluxonium(2.5, 0.5, 10, 0.3), DvrRepresentation{DvrKind::TruncatedPhase, Spacing::make(5, 32, true), false}},
            {CircuitSpec::fluxonium(2.5, 0.5, 10, 0.3), DvrRepresentation{DvrKind::TraditionalCharge, Spacing::make(1, 5), false}},
            {CircuitSpec::fluxonium(2.5, 0.5, 10, 0.3), HoRepresentation{LengthScale::Plasma, 401}},
            {CircuitSpec::transmon(0.2, 10, 0.3), DvrRepresentation{DvrKind::TruncatedPhase, Spacing::make(1, 1), true}},
            {CircuitSpec::transmon(0.2, 10, 0.3), FdRepresentation{std::nullopt, 2}},
        };
        double herm = 0.0;
        for (const auto& [c, r] : hams)
            for (Eigen::Index d : {9, 31, 61}) {
                const auto h = assemble(c, r, d);
                herm = std::max(herm, h.hermiticity_defect() / std::max(1.0, h.max_abs()));
            }
        check(herm < 1e-14, "hermiticity defect " + format_number(herm));

        double dft = 0.0;
        for (DvrKind k : {DvrKind::TruncatedPhase, DvrKind::TruncatedCharge}) {
            const Spacing s = is_phase(k) ? Spacing::make(1, 8, true) : Spacing::make(1, 4);
            for (std::int64_t M : {3, 17, 50}) {
                const auto b = DvrBasis::make(k, s, M);
                const double sign = is_phase(k) ? 1.0 : -1.0;
                const double d = static_cast<double>(b.dim());
                const double dy = b.conjugate_spacing().value();
                for (int p : {1, 2}) {
                    const auto m = conj_moment_truncated(b, p);
                    for (std::int64_t a = -M; a <= M; ++a)
                        for (std::int64_t c = -M; c <= M; ++c) {
                            std::complex<double> acc{};
                            for (std::int64_t n = -M; n <= M; ++n)
                                acc += std::pow(static_cast<double>(n) * dy, p) *
                                       std::exp(std::complex<double>(0, -sign * 2 * kPi * static_cast<double>(n * (a - c)) / d));
                            dft = std::max(dft, std::abs(m.entries(b.row(a), b.row(c)) - acc / d) / std::max(1.0, m.max_abs()));
                        }
                }
            }
        }
        check(dft <= 1e-12, "DFT vs direct sum " + format_number(dft));

        std::vector<double> gaps;
        for (std::int64_t M : {20, 60, 150}) {
            const Spacing s = Spacing::make(1, 4, true);
            const auto tr = conj_moment_truncated(DvrBasis::make(DvrKind::TruncatedPhase, s, M), 2);
            const auto td = conj_moment_traditional(DvrBasis::make(DvrKind::TraditionalPhase, s, M), 2);
            gaps.push_back((tr.entries.block(M - 5, M - 5, 11, 11) - td.entries.block(M - 5, M - 5, 11, 11))
                               .cwiseAbs()
                               .maxCoeff() /
                           td.max_abs());
        }
        check(gaps[1] < gaps[0] && gaps[2] < gaps[1], "continuum convergence");

        double stencil = 0.0;
        for (int M = 1; M <= 6; ++M) {
            const auto c = fd_coefficients(M);
            for (int p = 0; p <= 2 * M + 1; ++p) {
                double lhs = 0.0, scale = 0.0;
                for (int k = -M; k <= M; ++k) {
                    lhs += c[static_cast<std::size_t>(k + M)] * std::pow(0.3 + k, p);
                    scale += std::abs(c[static_cast<std::size_t>(k + M)] * std::pow(0.3 + k, p));
                }
                const double rhs = p >= 2 ? p * (p - 1) * std::pow(0.3, p - 2) : 0.0;
                stencil = std::max(stencil, std::abs(lhs - rhs) / std::max(1.0, scale));
            }
        }
        check(stencil < 1e-10, "stencil exactness " + format_number(stencil));

        double unitary = 0.0, fast = 0.0;
        std::mt19937 rng(7);
        std::normal_distribution<double> g;
        for (DvrKind k : {DvrKind::TruncatedPhase, DvrKind::TraditionalPhase}) {
            const auto b = DvrBasis::make(k, Spacing::make(1, 8, true), 10);
            CVector v(b.dim());
            for (auto& x : v) x = {g(rng), g(rng)};
            const auto st = StateVector::normalized_checked(v / v.norm(), b.tag(), -10);
            for (std::int64_t beta = 0; beta <= b.dim(); ++beta)
                for (auto dir : {ShiftDirection::Plus, ShiftDirection::Minus}) {
                    const auto u = shift_operator(b, {beta, dir}).entries;
                    if (is_truncated(k))
                        unitary = std::max(unitary, (u.adjoint() * u - CMatrix::Identity(b.dim(), b.dim())).norm());
                    fast = std::max(fast, (apply_shift(st, b, {beta, dir}).state.coefficients - u * st.coefficients).norm());
                }
        }
        check(unitary <= 1e-14, "shift unitarity " + format_number(unitary));
        check(fast <= 1e-14, "shift fast path " + format_number(fast));

        const auto fc = CircuitSpec::fluxonium(2.5, 0.5, 10, 0.5);
        const auto spec = eigensolve(assemble(fc, DvrRepresentation{DvrKind::TraditionalCharge, Spacing::make(1, 5), false}, 81), 8);
        std::vector<double> sums(8, 0.0);
        for (const auto& r : decompose(spec, 8, -40)) sums[static_cast<std::size_t>(r.level)] += r.magnitude_sq;
        double rows = 0.0;
        for (double s : sums) rows = std::max(rows, std::abs(s - 1.0));
        check(rows <= 1e-10, "decomposition row sums " + format_number(rows));

        double cosg = 0.0;
        for (double t0 : {0.5, 1.0, 2.5})
            cosg = std::max(cosg, std::abs(cos_in_ho(HoBasis{t0, 1, 1001}, 0.0).entries(0, 0).real() - std::exp(-t0 * t0 / 4)));
        check(cosg <= 1e-10, "HO cos ground element " + format_number(cosg));

        std::string text = failed.empty() ? "8 property groups hold" : "failed:";
        for (const auto& f : failed) text += " " + f + ";";
        return Outcome{failed.empty(), text};
    });

    suite.run(8, "Non-variational signature", 0, [&] {
        if (quarter.deltas.empty()) return Outcome{false, "LC dN=1/4 curve unavailable"};
        // The converged error sits far below the double floor, so its sign comes from the quad oracle;
        // the double curve must agree that it is unresolved rather than contradict it.
        const PlateauRule rule = plateau_for(lc, CurveScale::LcScaled);
        const auto sat = saturation_P(quarter, rule);
        const double q61 = oracle::lc_charge_dvr_scaled_error(1, 1, 1, 4, 61);
        const double q81 = oracle::lc_charge_dvr_scaled_error(1, 1, 1, 4, 81);
        const bool stable = std::abs(q61 / q81 - 1.0) < 1e-3;
        const bool floor_ok = sat.saturated && sat.P <= rule.floor;
        return Outcome{q81 < 0.0 && stable && floor_ok,
                       "quad-precision converged delta " + format_number(q81) + " (d=81), double curve at floor with |delta|=" +
                           format_number(sat.P) + " <= " + format_number(rule.floor)};
    });

    std::printf("%d of 8 criteria failed\n", suite.failures());
    return suite.failures() == 0 ? 0 : 1;
}
