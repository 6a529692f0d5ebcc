#include <CLI11.hpp>

#include <iostream>
#include <optional>
#include <string>

#include "sincdvr/commands.hpp"
#include "sincdvr/error.hpp"

namespace {

/// Exit codes of the command-line tool.
enum ExitCode : int { kOk = 0, kConfigError = 2, kNumericalError = 3 };

struct Args {
    std::string config_path;
    std::string preset;
    std::string out_dir = ".";
    std::optional<unsigned> threads;
    bool plot_script = false;
};

void add_common(CLI::App* cmd, Args& a) {
    auto* cfg = cmd->add_option("--config", a.config_path, "Run configuration (JSON)");
    auto* pre = cmd->add_option("--preset", a.preset, "Shipped configuration")
                    ->check(CLI::IsMember({"lc", "fluxonium", "transmon-tl", "transmon-cl"}));
    cfg->excludes(pre);
    cmd->add_option("--out", a.out_dir, "Output directory")->capture_default_str();
    cmd->add_option("--threads", a.threads, "Worker threads (0 = all cores)");
    cmd->add_flag("--emit-plot-script", a.plot_script, "Also write a gnuplot script");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Superconducting-circuit spectra in sinc DVR, harmonic-oscillator and finite-difference bases"};
    app.require_subcommand(1);
    Args args;
    const char* commands[][2] = {
        {"curve", "Energy error against matrix size, one CSV per representation and level"},
        {"metrics", "Decoherence-accurate size R and saturation precision P per representation"},
        {"levels", "R and P for several energy levels"},
        {"decompose", "Eigenstate contributions |<Psi_i|psi_alpha>|^2"},
        {"shift", "Phase-shifted ground state: energy and supercurrent against flux"},
    };
    for (const auto& c : commands) add_common(app.add_subcommand(c[0], c[1]), args);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kOk : kConfigError;
    }

    const std::string command = app.get_subcommands().front()->get_name();
    try {
        if (args.config_path.empty() == args.preset.empty())
            throw sincdvr::ConfigError("give exactly one of --config or --preset");
        const sincdvr::RunConfig cfg =
            args.preset.empty() ? sincdvr::load_run_config(args.config_path) : sincdvr::preset(args.preset);
        sincdvr::CommandOptions opts;
        opts.out_dir = args.out_dir;
        opts.threads = args.threads;
        opts.plot_script = args.plot_script;
        const auto report = sincdvr::run_command(command, cfg, opts);
        for (const auto& f : report.files) std::cout << (opts.out_dir / f).string() << '\n';
        std::cerr << command << ": " << report.files.size() << " file(s) in " << report.wall_seconds << " s\n";
        return kOk;
    } catch (const sincdvr::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kConfigError;
    } catch (const sincdvr::NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return kNumericalError;
    } catch (const std::exception& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return kNumericalError;
    }
}
