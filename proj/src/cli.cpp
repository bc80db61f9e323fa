#include "bloch/cli.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "bloch/analytic.hpp"
#include "bloch/core.hpp"
#include "bloch/io.hpp"
#include "bloch/numeric.hpp"

namespace bloch::cli {

namespace fs = std::filesystem;
using nlohmann::json;

BlochVector parse_initial(const std::string& text) {
    if (text == "ground") return {0.0, 0.0, 1.0};
    if (text == "mixed") return {0.0, 0.0, 0.0};
    if (text == "excited") return {0.0, 0.0, -1.0};
    BlochVector r;
    char comma1 = 0, comma2 = 0;
    std::istringstream in(text);
    in >> r.r1 >> comma1 >> r.r2 >> comma2 >> r.r3;
    if (!in || comma1 != ',' || comma2 != ',') {
        throw std::invalid_argument(
            "initial state must be 'ground', 'mixed', 'excited', or "
            "'r1,r2,r3', got '" + text + "'");
    }
    return r;
}

namespace {

std::ofstream open_output(const fs::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot open output file " + path.string());
    }
    return out;
}

fs::path prepare_out_dir(const RunConfig& cfg) {
    if (cfg.out_dir.empty()) {
        throw std::invalid_argument("this command requires --out");
    }
    fs::path dir(cfg.out_dir);
    fs::create_directories(dir);
    return dir;
}

SystemParams params_from(const RunConfig& cfg) {
    return make_params(cfg.t1, cfg.t2, cfg.omega, cfg.r3_tilde, cfg.delta,
                       cfg.phi);
}

void emit_json(const RunConfig& cfg, std::ostream& fallback,
               const std::string& stem, const json& doc) {
    const std::string text = doc.dump(2);
    if (cfg.out_dir.empty()) {
        fallback << text << '\n';
        return;
    }
    fs::path dir(cfg.out_dir);
    fs::create_directories(dir);
    auto out = open_output(dir / (stem + ".json"));
    out << text << '\n';
}

json base_metadata(const RunConfig& cfg, const SystemParams& p) {
    return {{"software", kSoftwareVersion},
            {"params", params_json(p)},
            {"backend",
             cfg.backend == sweep::Backend::analytic ? "analytic" : "numeric"}};
}

int run_validate(const RunConfig& cfg, std::ostream& out) {
    const PhysicalityReport report =
        validate_physicality(cfg.t1, cfg.t2, cfg.r3_tilde);
    json doc{{"software", kSoftwareVersion},
             {"t1", cfg.t1},
             {"t2", cfg.t2},
             {"r3_tilde", cfg.r3_tilde},
             {"rates_positive", report.rates_positive},
             {"thermal_in_range", report.thermal_in_range},
             {"positivity_condition", report.positivity_condition},
             {"physical", report.physical()},
             {"violations", report.violations}};
    emit_json(cfg, out, "validate", doc);
    return report.physical() ? 0 : 1;
}

int run_steady_state(const RunConfig& cfg, std::ostream& out) {
    const SystemParams p = params_from(cfg);
    const BlochVector ss = numeric::steady_state(p);
    json doc = base_metadata(cfg, p);
    doc["steady_state"] = bloch_json(ss);

    if (p.drive.on_resonance()) {
        const analytic::Equilibrium eq = analytic::equilibrium_state(p);
        const analytic::OptimalRabi best =
            analytic::optimal_rabi(p.t1(), p.t2(), p.r3_tilde());
        doc["equilibrium"] = bloch_json(eq.bloch);
        doc["rho_eq"] = density_json(eq.rho);
        doc["rho11_eq"] = eq.rho.rho11;
        doc["relation_residual"] = analytic::equilibrium_relation_residual(p);
        doc["omega_r"] = best.omega_r;
        doc["max_asymptotic_coherence"] = best.max_coherence;
        doc["zeta_eq"] = interference(eq.bloch);
        doc["chi_eq"] = purity(eq.bloch);
    }
    emit_json(cfg, out, "steady_state", doc);
    return 0;
}

int run_simulate(const RunConfig& cfg, std::ostream&) {
    const SystemParams p = params_from(cfg);
    if (cfg.backend == sweep::Backend::analytic && !p.drive.on_resonance()) {
        throw std::invalid_argument(
            "simulate: the analytic backend requires Delta = 0; pass "
            "--backend numeric for detuned drives");
    }
    const BlochVector r0 = parse_initial(cfg.initial);
    const fs::path dir = prepare_out_dir(cfg);

    const sweep::GridAxis time_axis(sweep::AxisScale::linear, 0.0, cfg.t_max,
                                    cfg.samples);
    const std::vector<sweep::Column> columns{
        sweep::Column::r1,    sweep::Column::r2,  sweep::Column::r3,
        sweep::Column::rho11, sweep::Column::rho22, sweep::Column::chi,
        sweep::Column::zeta};
    const sweep::TimeSeries series =
        sweep::time_series(p, r0, time_axis, columns, cfg.backend);

    {
        auto out = open_output(dir / "simulate.csv");
        write_time_series_csv(out, series, {});
    }

    sweep::RevivalReport revivals = sweep::detect_revivals(
        series.times, series.column_values(sweep::Column::zeta),
        cfg.revival_threshold);

    json doc = base_metadata(cfg, p);
    doc["initial"] = bloch_json(r0);
    doc["time_axis"] = axis_json(time_axis);
    doc["revivals"] = revival_json(revivals);
    if (p.drive.on_resonance()) {
        doc["regime"] = analytic::to_string(analytic::classify_regime(p));
        const analytic::Equilibrium eq = analytic::equilibrium_state(p);
        doc["equilibrium"] = bloch_json(eq.bloch);
        doc["rho_eq"] = density_json(eq.rho);
    } else {
        doc["steady_state"] = bloch_json(numeric::steady_state(p));
    }
    {
        auto out = open_output(dir / "simulate.json");
        out << doc.dump(2) << '\n';
    }
    return 0;
}

void emit_map_outputs(const fs::path& dir, const std::string& stem,
                      const sweep::FieldMap& map,
                      const sweep::QuantizationBounds& quant, json doc) {
    {
        auto out = open_output(dir / (stem + ".csv"));
        write_field_map_csv(out, map);
    }
    {
        const std::vector<std::uint8_t> pixels = render_pgm(map, quant);
        auto out = open_output(dir / (stem + ".pgm"));
        write_pgm(out, map.x_axis.count, map.y_axis.count, pixels);
    }
    doc["observable"] = sweep::observable_name(map.observable);
    doc["x_axis"] = axis_json(map.x_axis);
    doc["y_axis"] = axis_json(map.y_axis);
    doc["y_parameter"] = map.swept == sweep::SweptParameter::rabi_frequency
                             ? "omega"
                             : "log10_t2";
    doc["quantization"] = {{"v_min", quant.v_min},
                           {"v_max", quant.v_max},
                           {"levels", quant.levels}};
    doc["pgm"] = {{"format", "P5"},
                  {"maxval", 255},
                  {"row_order", "top row is y_max; y axis increases upward"}};
    auto out = open_output(dir / (stem + ".json"));
    out << doc.dump(2) << '\n';
}

int run_sweep(const RunConfig& cfg, std::ostream&) {
    const SystemParams p = params_from(cfg);
    const BlochVector r0 = parse_initial(cfg.initial);
    const fs::path dir = prepare_out_dir(cfg);

    const sweep::GridAxis time_axis(sweep::AxisScale::linear, 0.0, cfg.t_max,
                                    cfg.grid_nx);
    sweep::FieldMap map = [&] {
        if (cfg.sweep_kind == "omega") {
            return sweep::sweep_omega_time(
                p, sweep::GridAxis(sweep::AxisScale::linear, cfg.y_min,
                                   cfg.y_max, cfg.grid_ny),
                time_axis, cfg.observable, r0, cfg.workers);
        }
        if (cfg.sweep_kind == "logt2") {
            return sweep::sweep_logT2_time(
                p, sweep::GridAxis(sweep::AxisScale::log10, cfg.y_min,
                                   cfg.y_max, cfg.grid_ny),
                time_axis, cfg.observable, r0, cfg.workers);
        }
        throw std::invalid_argument("sweep kind must be 'omega' or 'logt2'");
    }();

    sweep::QuantizationBounds quant = sweep::default_quantization(cfg.observable);
    quant.levels = cfg.levels;
    if (cfg.quant_min) quant.v_min = *cfg.quant_min;
    if (cfg.quant_max) quant.v_max = *cfg.quant_max;

    json doc = base_metadata(cfg, p);
    doc["initial"] = bloch_json(r0);
    emit_map_outputs(dir, "sweep", map, quant, std::move(doc));
    return 0;
}

int run_figure(const RunConfig& cfg, std::ostream&) {
    const sweep::FigurePreset* preset =
        sweep::find_figure_preset(cfg.figure_name);
    if (preset == nullptr) {
        std::ostringstream msg;
        msg << "unknown figure preset '" << cfg.figure_name << "'; available:";
        for (const auto& candid : sweep::figure_presets()) {
            msg << ' ' << candid.name;
        }
        throw std::invalid_argument(msg.str());
    }
    const fs::path dir = prepare_out_dir(cfg);

    json doc{{"software", kSoftwareVersion},
             {"figure", preset->name},
             {"description", preset->description},
             {"params", params_json(preset->base)},
             {"backend", "analytic"},
             {"initial", bloch_json(preset->initial)}};

    if (preset->kind == sweep::PresetKind::series_family) {
        sweep::TimeSeries merged;
        std::vector<std::string> labels;
        for (const auto& [label, params] : preset->family) {
            const sweep::TimeSeries one = sweep::time_series(
                params, preset->initial, preset->time_axis, preset->columns);
            if (merged.times.empty()) {
                merged.times = one.times;
                merged.rows.assign(one.times.size(), {});
            }
            for (std::size_t i = 0; i < one.times.size(); ++i) {
                merged.rows[i].insert(merged.rows[i].end(), one.rows[i].begin(),
                                      one.rows[i].end());
            }
            for (sweep::Column c : preset->columns) {
                merged.columns.push_back(c);
                labels.push_back(label);
            }
        }
        {
            auto out = open_output(dir / (preset->name + ".csv"));
            write_time_series_csv(out, merged, labels);
        }
        json curves = json::array();
        for (const auto& [label, params] : preset->family) {
            curves.push_back({{"label", label}, {"params", params_json(params)}});
        }
        doc["curves"] = curves;
        doc["time_axis"] = axis_json(preset->time_axis);
        auto out = open_output(dir / (preset->name + ".json"));
        out << doc.dump(2) << '\n';
        return 0;
    }

    const sweep::FieldMap map =
        preset->kind == sweep::PresetKind::omega_time_map
            ? sweep::sweep_omega_time(preset->base, *preset->y_axis,
                                      preset->time_axis, preset->observable,
                                      preset->initial, cfg.workers)
            : sweep::sweep_logT2_time(preset->base, *preset->y_axis,
                                      preset->time_axis, preset->observable,
                                      preset->initial, cfg.workers);
    emit_map_outputs(dir, preset->name, map, preset->quantization,
                     std::move(doc));
    return 0;
}

}  // namespace

int run(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    try {
        switch (cfg.command) {
            case Command::validate: return run_validate(cfg, out);
            case Command::steady_state: return run_steady_state(cfg, out);
            case Command::simulate: return run_simulate(cfg, out);
            case Command::sweep_grid: return run_sweep(cfg, out);
            case Command::figure: return run_figure(cfg, out);
        }
        err << "error: unknown command\n";
        return 1;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
}

}  // namespace bloch::cli
