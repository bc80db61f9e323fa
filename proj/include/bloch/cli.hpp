// cli.hpp — command configuration and dispatch for the blochsim front end.

#pragma once

#include <cstddef>
#include <iostream>
#include <optional>
#include <string>

#include "bloch/sweep.hpp"
#include "bloch/types.hpp"

namespace bloch::cli {

enum class Command { simulate, sweep_grid, steady_state, figure, validate };

// Raw run configuration as parsed from flags. Parameter validation happens
// inside run() so that bad values produce a domain failure (exit 1), not a
// crash; flag-level problems are usage errors (exit 2) handled by the parser.
struct RunConfig {
    Command command = Command::simulate;

    double t1 = 1.5;
    double t2 = 0.5;
    double omega = 1.0;
    double delta = 0.0;
    double phi = 0.0;
    double r3_tilde = 0.0;

    std::string initial = "ground";  // named preset or "r1,r2,r3"
    sweep::Backend backend = sweep::Backend::analytic;

    std::string out_dir;       // required by simulate/sweep/figure
    std::string figure_name;   // figure

    // simulate
    double t_max = 10.0;
    std::size_t samples = 1001;
    double revival_threshold = sweep::kDefaultRevivalThreshold;

    // sweep
    std::string sweep_kind = "omega";  // "omega" | "logt2"
    double y_min = 0.0;
    double y_max = 6.0;
    std::size_t grid_ny = 200;
    std::size_t grid_nx = 200;
    sweep::Observable observable = sweep::Observable::zeta;
    int levels = 20;
    std::optional<double> quant_min;
    std::optional<double> quant_max;

    unsigned workers = 0;  // 0 = hardware concurrency
};

// Named initial states: "ground" = (0,0,1) (all population in the lower
// level), "mixed" = (0,0,0), "excited" = (0,0,-1); otherwise "r1,r2,r3".
BlochVector parse_initial(const std::string& text);

// Executes the configured command, writing result files under out_dir (or
// JSON to `out` for steady-state/validate when out_dir is empty).
// Returns 0 on success, 1 on domain/validation/runtime failure.
int run(const RunConfig& cfg, std::ostream& out = std::cout,
        std::ostream& err = std::cerr);

}  // namespace bloch::cli
