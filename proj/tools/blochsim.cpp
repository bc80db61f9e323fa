// blochsim — CLI for the driven, damped two-level system: single
// simulations, parameter sweeps, figure presets, steady states, and
// physicality validation. Emits CSV, binary PGM, and JSON.

#include <string>

#include <CLI11.hpp>

#include "bloch/cli.hpp"

namespace {

void add_param_flags(CLI::App* cmd, bloch::cli::RunConfig& cfg,
                     bool with_drive = true) {
    cmd->add_option("--t1", cfg.t1, "population relaxation time T1");
    cmd->add_option("--t2", cfg.t2, "decoherence time T2");
    cmd->add_option("--r3tilde", cfg.r3_tilde,
                    "thermal equilibrium population difference [0, 1]");
    if (with_drive) {
        cmd->add_option("--omega", cfg.omega, "Rabi frequency (>= 0)");
        cmd->add_option("--delta", cfg.delta, "detuning");
        cmd->add_option("--phi", cfg.phi, "field phase (radians)");
    }
}

bool parse_backend(const std::string& name, bloch::cli::RunConfig& cfg) {
    if (name == "analytic") {
        cfg.backend = bloch::sweep::Backend::analytic;
        return true;
    }
    if (name == "numeric") {
        cfg.backend = bloch::sweep::Backend::numeric;
        return true;
    }
    return false;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "blochsim: analytic and numeric solutions of the optical Bloch "
        "equations for a driven two-level system in a Markovian bath"};
    app.require_subcommand(1);

    bloch::cli::RunConfig cfg;
    std::string backend = "analytic";
    std::string observable = "zeta";

    CLI::App* simulate =
        app.add_subcommand("simulate", "time evolution from an initial state");
    add_param_flags(simulate, cfg);
    simulate->add_option("--initial", cfg.initial,
                         "ground | mixed | excited | r1,r2,r3");
    simulate->add_option("--backend", backend, "analytic | numeric");
    simulate->add_option("--tmax", cfg.t_max, "time horizon");
    simulate->add_option("--samples", cfg.samples, "number of samples");
    simulate->add_option("--threshold", cfg.revival_threshold,
                         "revival detection threshold on zeta");
    simulate->add_option("--out", cfg.out_dir, "output directory")->required();

    CLI::App* sweep_cmd =
        app.add_subcommand("sweep", "observable map over a parameter x time grid");
    add_param_flags(sweep_cmd, cfg);
    sweep_cmd->add_option("--kind", cfg.sweep_kind,
                          "swept parameter: omega | logt2");
    sweep_cmd->add_option("--y-min", cfg.y_min, "sweep axis lower bound");
    sweep_cmd->add_option("--y-max", cfg.y_max, "sweep axis upper bound");
    sweep_cmd->add_option("--grid", cfg.grid_ny, "sweep-axis samples (rows)");
    sweep_cmd->add_option("--grid-t", cfg.grid_nx, "time samples (columns)");
    sweep_cmd->add_option("--tmax", cfg.t_max, "time horizon");
    sweep_cmd->add_option("--observable", observable,
                          "zeta | chi | log10_zeta | rho11");
    sweep_cmd->add_option("--initial", cfg.initial, "initial state");
    sweep_cmd->add_option("--levels", cfg.levels, "grayscale levels");
    double quant_min = 0.0, quant_max = 0.0;
    CLI::Option* qmin =
        sweep_cmd->add_option("--v-min", quant_min, "quantization lower bound");
    CLI::Option* qmax =
        sweep_cmd->add_option("--v-max", quant_max, "quantization upper bound");
    sweep_cmd->add_option("--threads", cfg.workers,
                          "worker threads (0 = hardware)");
    sweep_cmd->add_option("--out", cfg.out_dir, "output directory")->required();

    CLI::App* steady = app.add_subcommand(
        "steady-state", "asymptotic state, optimal Rabi frequency");
    add_param_flags(steady, cfg);
    steady->add_option("--out", cfg.out_dir,
                       "output directory (default: stdout)");

    CLI::App* figure =
        app.add_subcommand("figure", "built-in figure presets");
    figure->add_option("--name", cfg.figure_name, "preset name (fig1a ... fig6)")
        ->required();
    figure->add_option("--threads", cfg.workers,
                       "worker threads (0 = hardware)");
    figure->add_option("--out", cfg.out_dir, "output directory")->required();

    CLI::App* validate =
        app.add_subcommand("validate", "physicality report for parameters");
    add_param_flags(validate, cfg, /*with_drive=*/false);
    validate->add_option("--out", cfg.out_dir,
                         "output directory (default: stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;  // usage error
    }

    if (!parse_backend(backend, cfg)) {
        std::cerr << "error: unknown backend '" << backend << "'\n";
        return 2;
    }
    if (auto obs = bloch::sweep::parse_observable(observable)) {
        cfg.observable = *obs;
    } else {
        std::cerr << "error: unknown observable '" << observable << "'\n";
        return 2;
    }
    if (qmin->count() > 0) cfg.quant_min = quant_min;
    if (qmax->count() > 0) cfg.quant_max = quant_max;

    if (simulate->parsed()) cfg.command = bloch::cli::Command::simulate;
    if (sweep_cmd->parsed()) cfg.command = bloch::cli::Command::sweep_grid;
    if (steady->parsed()) cfg.command = bloch::cli::Command::steady_state;
    if (figure->parsed()) cfg.command = bloch::cli::Command::figure;
    if (validate->parsed()) cfg.command = bloch::cli::Command::validate;

    return bloch::cli::run(cfg);
}
