#include "sincdvr/commands.hpp"

#include <Eigen/Core>
#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <sstream>

#include "parallel.hpp"
#include "sincdvr/error.hpp"

#ifndef SINCDVR_VERSION
#define SINCDVR_VERSION "0.0.0"
#endif

namespace sincdvr {

namespace fs = std::filesystem;
using nlohmann::json;

std::string_view library_version() noexcept { return SINCDVR_VERSION; }

std::string config_hash(const RunConfig& cfg) {
    // nlohmann::json objects keep keys sorted, so dump() is canonical.
    const std::string text = run_config_to_json(cfg).dump();
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char ch : text) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::string file_label(const Representation& rep) {
    std::string out;
    for (char c : describe(rep)) {
        const bool keep = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9');
        if (keep) out += c;
        else if (!out.empty() && out.back() != '_') out += '_';
    }
    while (!out.empty() && out.back() == '_') out.pop_back();
    return out;
}

namespace {

class Run {
public:
    Run(std::string command, const RunConfig& cfg, const CommandOptions& opts)
        : command_(std::move(command)), cfg_(cfg), opts_(opts), start_(std::chrono::steady_clock::now()),
          started_utc_(std::time(nullptr)) {
        cfg_.validate();
        std::error_code ec;
        fs::create_directories(opts_.out_dir, ec);
        if (ec) throw ConfigError("--out: cannot create '" + opts_.out_dir.string() + "': " + ec.message());
    }

    [[nodiscard]] unsigned threads() const { return opts_.threads.value_or(cfg_.threads); }
    [[nodiscard]] bool plot() const { return opts_.plot_script || cfg_.plot_script; }

    /// Writes a file below the output directory; `rel` is recorded in the manifest.
    template <class Writer>
    void emit(const fs::path& rel, Writer&& write) {
        const fs::path full = opts_.out_dir / rel;
        if (full.has_parent_path()) fs::create_directories(full.parent_path());
        std::ofstream out(full, std::ios::binary);
        if (!out) throw NumericalError("cannot write '" + full.string() + "'");
        write(out);
        out.close();
        if (!out) throw NumericalError("failed writing '" + full.string() + "'");
        report_.files.push_back(rel);
    }

    void note(const std::string& key, json value) { extra_[key] = std::move(value); }

    CommandReport finish() {
        report_.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
        char stamp[32];
        std::tm tm{};
        gmtime_r(&started_utc_, &tm);
        std::strftime(stamp, sizeof stamp, "%Y-%m-%dT%H:%M:%SZ", &tm);
        json m;
        m["command"] = command_;
        m["config_hash"] = config_hash(cfg_);
        m["config"] = run_config_to_json(cfg_);
        m["versions"] = {{"sincdvr", std::string(library_version())},
                         {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) +
                                       "." + std::to_string(EIGEN_MINOR_VERSION)},
                         {"nlohmann_json", std::to_string(NLOHMANN_JSON_VERSION_MAJOR) + "." +
                                               std::to_string(NLOHMANN_JSON_VERSION_MINOR) + "." +
                                               std::to_string(NLOHMANN_JSON_VERSION_PATCH)}};
        m["started_utc"] = stamp;
        m["wall_time_s"] = report_.wall_seconds;
        m["threads"] = threads();
        m["files"] = json::array();
        for (const auto& f : report_.files) m["files"].push_back(f.generic_string());
        for (auto& [k, v] : extra_.items()) m[k] = v;
        std::ofstream out(opts_.out_dir / ("manifest_" + command_ + ".json"));
        out << m.dump(2) << '\n';
        if (!out) throw NumericalError("failed writing the manifest");
        return report_;
    }

private:
    std::string command_;
    const RunConfig& cfg_;
    CommandOptions opts_;
    std::chrono::steady_clock::time_point start_;
    std::time_t started_utc_;
    CommandReport report_;
    json extra_ = json::object();
};

std::string index_tag(std::size_t i) {
    char buf[8];
    std::snprintf(buf, sizeof buf, "%03zu", i);
    return buf;
}

json plateau_json(const PlateauRule& r) { return {{"window", r.window}, {"band", r.band}, {"floor", r.floor}}; }

void gnuplot_metrics(std::ostream& os, const std::string& csv) {
    os << "# R and P against grid spacing, one series per representation kind\n"
       << "set datafile separator ','\n"
       << "set key autotitle columnhead\n"
       << "set logscale y\n"
       << "set xlabel 'grid spacing (units of pi for phase grids)'\n"
       << "set multiplot layout 1,2\n"
       << "set ylabel 'R'\n"
       << "plot '" << csv << "' using ($4/$5):($7) with points title 'R'\n"
       << "set ylabel 'P'\n"
       << "plot '" << csv << "' using ($4/$5):($8) with points title 'P'\n"
       << "unset multiplot\n";
}

}  // namespace

std::vector<MetricsRow> run_metrics(const RunConfig& cfg, const std::vector<Representation>& reps,
                                    const std::vector<std::vector<std::int64_t>>& sizes, const std::vector<int>& levels,
                                    unsigned threads) {
    const double thr = cfg.curve_threshold();
    const PlateauRule rule = plateau_for(cfg.circuit, cfg.scale);
    std::vector<std::vector<ConvergenceCurve>> curves(reps.size());
    detail::parallel_for(reps.size(), threads, [&](std::size_t i) {
        curves[i] = sweep_levels(cfg.circuit, reps[i], sizes[i], levels, {cfg.scale, 1});
    });
    std::vector<MetricsRow> rows;
    for (std::size_t i = 0; i < reps.size(); ++i)
        for (const auto& c : curves[i])
            rows.push_back({std::string(to_string(cfg.circuit.family)), rep_kind(reps[i]), rep_spacing(reps[i]), c.level,
                            compute_metrics(c, thr, rule)});
    return rows;
}

CommandReport cmd_curve(const RunConfig& cfg, const CommandOptions& opts) {
    Run run("curve", cfg, opts);
    std::vector<std::vector<ConvergenceCurve>> curves(cfg.representations.size());
    detail::parallel_for(curves.size(), run.threads(), [&](std::size_t i) {
        curves[i] = sweep_levels(cfg.circuit, cfg.representations[i].rep, cfg.sizes_for(i), cfg.levels, {cfg.scale, 1});
    });
    json index = json::array();
    for (std::size_t i = 0; i < curves.size(); ++i) {
        for (const auto& c : curves[i]) {
            const fs::path rel = fs::path("curves") / ("curve_" + index_tag(i) + "_" +
                                                       file_label(cfg.representations[i].rep) + "_L" +
                                                       std::to_string(c.level) + ".csv");
            run.emit(rel, [&](std::ostream& os) { write_curve_csv(os, c); });
            index.push_back({{"file", rel.generic_string()},
                             {"representation", describe(cfg.representations[i].rep)},
                             {"level", c.level}});
        }
    }
    if (run.plot()) {
        run.emit("curves.gp", [&](std::ostream& os) {
            os << "# |Delta| against matrix size; open points mark Delta < 0\n"
               << "set datafile separator ','\n"
               << "set logscale y\nset xlabel 'matrix size'\nset ylabel '|Delta|'\n"
               << "set arrow from graph 0, first " << format_number(cfg.curve_threshold())
               << " to graph 1, first " << format_number(cfg.curve_threshold()) << " nohead dt 2\n"
               << "plot \\\n";
            for (std::size_t k = 0; k < index.size(); ++k)
                os << "  'curves/" << fs::path(index[k]["file"].get<std::string>()).filename().string()
                   << "' using 1:($4 >= 0 ? $3 : 1/0) with points pt 7 title '"
                   << index[k]["representation"].get<std::string>() << " L" << index[k]["level"].get<int>()
                   << "', '' using 1:($4 < 0 ? $3 : 1/0) with points pt 6 notitle"
                   << (k + 1 < index.size() ? ", \\\n" : "\n");
        });
    }
    run.note("curves", index);
    run.note("scale", cfg.scale == CurveScale::Absolute ? "absolute" : "lc_scaled");
    return run.finish();
}

CommandReport cmd_metrics(const RunConfig& cfg, const CommandOptions& opts) {
    Run run("metrics", cfg, opts);
    std::vector<Representation> reps;
    std::vector<std::vector<std::int64_t>> sizes;
    for (std::size_t i = 0; i < cfg.representations.size(); ++i) {
        reps.push_back(cfg.representations[i].rep);
        sizes.push_back(cfg.sizes_for(i));
    }
    const auto rows = run_metrics(cfg, reps, sizes, cfg.levels, run.threads());
    run.emit("metrics.csv", [&](std::ostream& os) { write_metrics_csv(os, rows); });
    if (run.plot()) run.emit("metrics.gp", [&](std::ostream& os) { gnuplot_metrics(os, "metrics.csv"); });
    run.note("threshold", cfg.curve_threshold());
    run.note("plateau", plateau_json(plateau_for(cfg.circuit, cfg.scale)));
    return run.finish();
}

CommandReport cmd_levels(const RunConfig& cfg, const CommandOptions& opts) {
    Run run("levels", cfg, opts);
    const LevelStudyConfig study = cfg.level_study.value_or(LevelStudyConfig{});
    std::vector<Representation> reps = study.representations;
    std::vector<std::vector<std::int64_t>> sizes;
    if (reps.empty()) {
        for (std::size_t i = 0; i < cfg.representations.size(); ++i) {
            reps.push_back(cfg.representations[i].rep);
            sizes.push_back(cfg.sizes_for(i));
        }
    } else {
        sizes.assign(reps.size(), cfg.sizes);
    }
    // Sizes too small to hold the highest level are skipped.
    const int top = *std::max_element(study.levels.begin(), study.levels.end());
    for (auto& s : sizes) s.erase(s.begin(), std::upper_bound(s.begin(), s.end(), static_cast<std::int64_t>(top)));
    const auto rows = run_metrics(cfg, reps, sizes, study.levels, run.threads());
    run.emit("levels.csv", [&](std::ostream& os) { write_metrics_csv(os, rows); });
    if (run.plot()) {
        run.emit("levels.gp", [&](std::ostream& os) {
            os << "# R per level, one series per representation\n"
               << "set datafile separator ','\nset key autotitle columnhead\n"
               << "set xlabel 'level'\nset ylabel 'R'\n"
               << "plot 'levels.csv' using 6:7 with linespoints title 'R'\n";
        });
    }
    run.note("threshold", cfg.curve_threshold());
    run.note("plateau", plateau_json(plateau_for(cfg.circuit, cfg.scale)));
    return run.finish();
}

CommandReport cmd_decompose(const RunConfig& cfg, const CommandOptions& opts) {
    if (!cfg.decompose) throw ConfigError("decompose: section required for the decompose command");
    Run run("decompose", cfg, opts);
    const DecomposeConfig& dc = *cfg.decompose;
    std::vector<std::vector<ContributionRow>> tables(dc.representations.size());
    detail::parallel_for(tables.size(), run.threads(), [&](std::size_t i) {
        const auto& rep = dc.representations[i];
        const Spectrum s = eigensolve(assemble(cfg.circuit, rep, dc.size), dc.levels);
        const bool ho = std::holds_alternative<HoRepresentation>(rep);
        tables[i] = decompose(s, dc.levels, ho ? 0 : -static_cast<std::int64_t>(dc.size / 2));
    });
    json index = json::array();
    for (std::size_t i = 0; i < tables.size(); ++i) {
        const fs::path rel =
            fs::path("decompose") / ("decompose_" + index_tag(i) + "_" + file_label(dc.representations[i]) + ".csv");
        run.emit(rel, [&](std::ostream& os) { write_decomposition_csv(os, tables[i], dc.floor); });
        index.push_back({{"file", rel.generic_string()}, {"representation", describe(dc.representations[i])}});
        if (run.plot()) {
            run.emit(rel.parent_path() / (rel.stem().string() + ".gp"), [&](std::ostream& os) {
                os << "# log10 |<Psi_i|psi_alpha>|^2 heat map\n"
                   << "set datafile separator ','\nset xlabel 'basis index'\nset ylabel 'level'\n"
                   << "set cblabel 'log10 |c|^2'\nset view map\n"
                   << "splot '" << rel.filename().string() << "' every ::1 using 2:1:(log10($3)) with points pt 5 palette notitle\n";
            });
        }
    }
    run.note("decompositions", index);
    return run.finish();
}

CommandReport cmd_shift(const RunConfig& cfg, const CommandOptions& opts) {
    if (!cfg.shift) throw ConfigError("shift: section required for the shift command");
    Run run("shift", cfg, opts);
    const FluxSweepConfig& sc = *cfg.shift;
    const auto rows = flux_sweep(sc, run.threads());

    // Coefficients of the prepared ground state and its shifts by the largest beta.
    const DvrRepresentation rep{sc.kind, sc.spacing, false};
    const DvrBasis basis = rep.basis(sc.dim);
    const StateVector psi = eigenstate(eigensolve(assemble(sc.circuit, rep, sc.dim), 1), basis, 0);
    const std::int64_t beta = *std::max_element(sc.betas.begin(), sc.betas.end());
    const ShiftResult plus = apply_shift(psi, basis, {beta, ShiftDirection::Plus});
    const ShiftResult minus = apply_shift(psi, basis, {beta, ShiftDirection::Minus});
    // Fix the overall sign so the largest coefficient is positive.
    Eigen::Index peak = 0;
    psi.coefficients.cwiseAbs().maxCoeff(&peak);
    const cplx phase = std::abs(psi.coefficients(peak)) > 0 ? std::conj(psi.coefficients(peak)) / std::abs(psi.coefficients(peak)) : cplx{1.0};

    run.emit("shift_sweep.csv", [&](std::ostream& os) { write_flux_sweep_csv(os, rows); });
    run.emit("shift_coefficients.csv", [&](std::ostream& os) {
        os << "alpha,theta,coefficient,shifted_plus,shifted_minus\n";
        for (Eigen::Index r = 0; r < basis.dim(); ++r)
            os << basis.alpha(r) << ',' << format_number(static_cast<double>(basis.alpha(r)) * basis.step()) << ','
               << format_number((phase * psi.coefficients(r)).real()) << ','
               << format_number((phase * plus.state.coefficients(r)).real()) << ','
               << format_number((phase * minus.state.coefficients(r)).real()) << '\n';
    });
    if (run.plot()) {
        run.emit("shift.gp", [&](std::ostream& os) {
            os << "# energy and supercurrent of the shifted ground state against flux\n"
               << "set datafile separator ','\nset key autotitle columnhead\nset xlabel 'A'\n"
               << "set multiplot layout 1,2\n"
               << "set ylabel '<H> (GHz)'\nplot 'shift_sweep.csv' using 1:3:2 with points palette title '<H>'\n"
               << "set ylabel '<I>/I_C'\nplot 'shift_sweep.csv' using 1:4:2 with points palette title '<I>/I_C'\n"
               << "unset multiplot\n";
        });
    }
    json norms = json::array();
    for (std::size_t p = 0; p < sc.betas.size(); ++p) {
        const ShiftResult r = apply_shift(psi, basis, {sc.betas[p], sc.direction});
        norms.push_back({{"beta", sc.betas[p]}, {"phi", ShiftSpec{sc.betas[p], sc.direction}.phi(basis)}, {"norm", r.norm}});
    }
    run.note("shift_norms", norms);
    run.note("coefficient_shift_beta", beta);
    return run.finish();
}

CommandReport run_command(std::string_view command, const RunConfig& cfg, const CommandOptions& opts) {
    if (command == "curve") return cmd_curve(cfg, opts);
    if (command == "metrics") return cmd_metrics(cfg, opts);
    if (command == "levels") return cmd_levels(cfg, opts);
    if (command == "decompose") return cmd_decompose(cfg, opts);
    if (command == "shift") return cmd_shift(cfg, opts);
    throw ConfigError("command: unknown '" + std::string(command) + "'");
}

}  // namespace sincdvr
