#include "bloch/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <mutex>
#include <sstream>
#include <thread>

#include "bloch/analytic.hpp"
#include "bloch/core.hpp"
#include "bloch/numeric.hpp"

namespace bloch::sweep {

// ---------------------------------------------------------------------------
// Grid axes

GridAxis::GridAxis(AxisScale scale_, double min_, double max_,
                   std::size_t count_)
    : scale(scale_), min(min_), max(max_), count(count_) {
    if (!(min < max)) {
        throw std::invalid_argument("GridAxis: min must be < max");
    }
    if (count < 2) {
        throw std::invalid_argument("GridAxis: need at least 2 samples");
    }
    if (!std::isfinite(min) || !std::isfinite(max)) {
        throw std::invalid_argument("GridAxis: bounds must be finite");
    }
}

double GridAxis::coordinate(std::size_t i) const {
    if (i + 1 == count) return max;  // hit the bound exactly
    return min + step() * static_cast<double>(i);
}

double GridAxis::physical(std::size_t i) const {
    const double c = coordinate(i);
    return scale == AxisScale::log10 ? std::pow(10.0, c) : c;
}

// ---------------------------------------------------------------------------
// Observables

double observable_value(Observable obs, const BlochVector& r) {
    switch (obs) {
        case Observable::zeta: return interference(r);
        case Observable::chi: return purity(r);
        case Observable::log10_zeta: return std::log10(interference(r));
        case Observable::rho11: return 0.5 * (1.0 + r.r3);
    }
    throw std::logic_error("observable_value: unknown observable");
}

const char* observable_name(Observable obs) {
    switch (obs) {
        case Observable::zeta: return "zeta";
        case Observable::chi: return "chi";
        case Observable::log10_zeta: return "log10_zeta";
        case Observable::rho11: return "rho11";
    }
    return "unknown";
}

std::optional<Observable> parse_observable(std::string_view name) {
    if (name == "zeta") return Observable::zeta;
    if (name == "chi") return Observable::chi;
    if (name == "log10_zeta" || name == "log10zeta") return Observable::log10_zeta;
    if (name == "rho11") return Observable::rho11;
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// Field maps

namespace {

// Runs row_fn(iy) for every row, partitioned contiguously over the workers.
// Cells are pure functions of their coordinates, so the result buffer is
// position-deterministic for any worker count.
void parallel_rows(std::size_t ny, unsigned workers,
                   const std::function<void(std::size_t)>& row_fn) {
    unsigned n = workers == 0 ? std::thread::hardware_concurrency() : workers;
    n = std::max(1u, std::min<unsigned>(n, static_cast<unsigned>(ny)));
    if (n == 1) {
        for (std::size_t iy = 0; iy < ny; ++iy) row_fn(iy);
        return;
    }
    std::mutex error_mutex;
    std::exception_ptr first_error;
    std::vector<std::thread> pool;
    pool.reserve(n);
    for (unsigned w = 0; w < n; ++w) {
        const std::size_t begin = ny * w / n;
        const std::size_t end = ny * (w + 1) / n;
        pool.emplace_back([&, begin, end] {
            try {
                for (std::size_t iy = begin; iy < end; ++iy) row_fn(iy);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    if (first_error) std::rethrow_exception(first_error);
}

FieldMap sweep_rows(const SystemParams& base, const GridAxis& y_axis,
                    const GridAxis& time_axis, Observable obs,
                    const BlochVector& r0, SweptParameter swept,
                    unsigned workers) {
    FieldMap map{time_axis, y_axis, obs, swept, base, r0, {}};
    map.values.assign(y_axis.count * time_axis.count, 0.0);

    parallel_rows(y_axis.count, workers, [&](std::size_t iy) {
        SystemParams p =
            swept == SweptParameter::rabi_frequency
                ? make_params(base.t1(), base.t2(), y_axis.physical(iy),
                              base.r3_tilde(), 0.0, base.phi())
                : make_params(base.t1(), y_axis.physical(iy), base.omega(),
                              base.r3_tilde(), 0.0, base.phi());
        const auto coeffs = analytic::solve_coefficients(p, r0);
        double* row = &map.values[iy * time_axis.count];
        for (std::size_t ix = 0; ix < time_axis.count; ++ix) {
            const BlochVector r =
                analytic::evaluate(coeffs, p, r0, time_axis.coordinate(ix));
            row[ix] = observable_value(obs, r);
        }
    });
    return map;
}

}  // namespace

FieldMap sweep_omega_time(const SystemParams& base, const GridAxis& omega_axis,
                          const GridAxis& time_axis, Observable obs,
                          const BlochVector& r0, unsigned workers) {
    if (!base.drive.on_resonance()) {
        throw OffResonanceError("sweep_omega_time: grid sweeps use the "
                                "closed-form solution, Delta must be 0");
    }
    if (omega_axis.scale != AxisScale::linear || omega_axis.min < 0.0) {
        throw std::invalid_argument(
            "sweep_omega_time: Omega axis must be linear and nonnegative");
    }
    return sweep_rows(base, omega_axis, time_axis, obs, r0,
                      SweptParameter::rabi_frequency, workers);
}

FieldMap sweep_logT2_time(const SystemParams& base, const GridAxis& logt2_axis,
                          const GridAxis& time_axis, Observable obs,
                          const BlochVector& r0, unsigned workers) {
    if (!base.drive.on_resonance()) {
        throw OffResonanceError("sweep_logT2_time: grid sweeps use the "
                                "closed-form solution, Delta must be 0");
    }
    const double cap = std::log10(base.t1() / 2.0);
    if (logt2_axis.max > cap + 1e-12) {
        std::ostringstream msg;
        msg << "sweep_logT2_time: axis upper bound " << logt2_axis.max
            << " exceeds the complete-positivity cap log10(T1/2) = " << cap;
        throw std::invalid_argument(msg.str());
    }
    return sweep_rows(base, logt2_axis, time_axis, obs, r0,
                      SweptParameter::log10_t2, workers);
}

// ---------------------------------------------------------------------------
// Time series

const char* column_name(Column c) {
    switch (c) {
        case Column::r1: return "R1";
        case Column::r2: return "R2";
        case Column::r3: return "R3";
        case Column::rho11: return "rho11";
        case Column::rho22: return "rho22";
        case Column::chi: return "chi";
        case Column::zeta: return "zeta";
    }
    return "unknown";
}

std::vector<double> TimeSeries::column_values(Column c) const {
    const auto it = std::find(columns.begin(), columns.end(), c);
    if (it == columns.end()) {
        throw std::invalid_argument("TimeSeries: column not present");
    }
    const std::size_t j = static_cast<std::size_t>(it - columns.begin());
    std::vector<double> out(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) out[i] = rows[i][j];
    return out;
}

namespace {

double column_from_state(Column c, const BlochVector& r) {
    switch (c) {
        case Column::r1: return r.r1;
        case Column::r2: return r.r2;
        case Column::r3: return r.r3;
        case Column::rho11: return 0.5 * (1.0 + r.r3);
        case Column::rho22: return 0.5 * (1.0 - r.r3);
        case Column::chi: return purity(r);
        case Column::zeta: return interference(r);
    }
    throw std::logic_error("column_from_state: unknown column");
}

std::vector<BlochVector> numeric_states(const SystemParams& p,
                                        const BlochVector& r0,
                                        const GridAxis& axis) {
    if (axis.scale != AxisScale::linear || std::abs(axis.min) > 0.0) {
        throw std::invalid_argument(
            "time_series: numeric backend needs a linear time axis starting "
            "at 0");
    }
    const double h = axis.step();
    const auto refine = static_cast<std::size_t>(
        std::max(1.0, std::ceil(h / numeric::default_time_step(p))));
    numeric::IntegratorConfig cfg{h / static_cast<double>(refine), axis.max};
    const numeric::Trajectory traj = numeric::integrate(p, r0, cfg);
    std::vector<BlochVector> out(axis.count);
    for (std::size_t i = 0; i < axis.count; ++i) {
        out[i] = traj.states.at(i * refine);
    }
    return out;
}

}  // namespace

TimeSeries time_series(const SystemParams& p, const BlochVector& r0,
                       const GridAxis& time_axis,
                       const std::vector<Column>& columns, Backend backend) {
    if (columns.empty()) {
        throw std::invalid_argument("time_series: no columns requested");
    }
    TimeSeries series;
    series.columns = columns;
    series.times.resize(time_axis.count);
    for (std::size_t i = 0; i < time_axis.count; ++i) {
        series.times[i] = time_axis.coordinate(i);
    }

    std::vector<BlochVector> states;
    if (backend == Backend::analytic) {
        const auto coeffs = analytic::solve_coefficients(p, r0);
        states.resize(time_axis.count);
        for (std::size_t i = 0; i < time_axis.count; ++i) {
            states[i] = analytic::evaluate(coeffs, p, r0, series.times[i]);
        }
    } else {
        states = numeric_states(p, r0, time_axis);
    }

    series.rows.resize(time_axis.count);
    for (std::size_t i = 0; i < time_axis.count; ++i) {
        series.rows[i].reserve(columns.size());
        for (Column c : columns) {
            series.rows[i].push_back(column_from_state(c, states[i]));
        }
    }
    return series;
}

// ---------------------------------------------------------------------------
// Revival detection

namespace {

struct CrossingRefiner {
    // Returns the crossing time of (value - threshold) inside [t_lo, t_hi].
    std::function<double(double t_lo, double v_lo, double t_hi, double v_hi)>
        refine;
};

RevivalReport detect_impl(const std::vector<double>& times,
                          const std::vector<double>& values, double threshold,
                          const CrossingRefiner& refiner) {
    if (times.empty() || times.size() != values.size()) {
        throw std::invalid_argument(
            "detect_revivals: empty or mismatched series");
    }
    for (std::size_t i = 1; i < times.size(); ++i) {
        if (!(times[i] > times[i - 1])) {
            throw std::invalid_argument(
                "detect_revivals: sample times must be strictly increasing");
        }
    }

    RevivalReport report;
    report.threshold = threshold;

    const auto above = [&](std::size_t i) { return values[i] >= threshold; };

    // First downward crossing; above-intervals before it form the primary
    // coherence episode, not revivals.
    std::size_t first_drop = times.size();
    for (std::size_t i = 1; i < times.size(); ++i) {
        if (above(i - 1) && !above(i)) {
            first_drop = i;
            break;
        }
    }
    if (first_drop == times.size()) return report;

    std::size_t i = first_drop;
    while (i < times.size()) {
        if (!above(i)) {
            ++i;
            continue;
        }
        std::size_t j = i;
        while (j + 1 < times.size() && above(j + 1)) ++j;

        RevivalReport::Interval interval{};
        interval.t_start = refiner.refine(times[i - 1], values[i - 1], times[i],
                                          values[i]);
        interval.reaches_horizon = (j + 1 == times.size());
        interval.t_end =
            interval.reaches_horizon
                ? times[j]
                : refiner.refine(times[j], values[j], times[j + 1], values[j + 1]);
        report.intervals.push_back(interval);
        i = j + 1;
    }
    return report;
}

}  // namespace

RevivalReport detect_revivals(const std::vector<double>& times,
                              const std::vector<double>& series,
                              double threshold) {
    CrossingRefiner refiner;
    refiner.refine = [threshold](double t_lo, double v_lo, double t_hi,
                                 double v_hi) {
        if (v_hi == v_lo) return t_lo;
        return t_lo + (threshold - v_lo) * (t_hi - t_lo) / (v_hi - v_lo);
    };
    return detect_impl(times, series, threshold, refiner);
}

RevivalReport detect_revivals(const std::function<double(double)>& f,
                              const GridAxis& time_axis, double threshold) {
    std::vector<double> times(time_axis.count);
    std::vector<double> values(time_axis.count);
    for (std::size_t i = 0; i < time_axis.count; ++i) {
        times[i] = time_axis.coordinate(i);
        values[i] = f(times[i]);
    }
    CrossingRefiner refiner;
    refiner.refine = [&f, threshold](double t_lo, double v_lo, double t_hi,
                                     double /*v_hi*/) {
        bool lo_above = v_lo >= threshold;
        for (int iter = 0; iter < 60 && t_hi - t_lo > 1e-13; ++iter) {
            const double mid = 0.5 * (t_lo + t_hi);
            if ((f(mid) >= threshold) == lo_above) {
                t_lo = mid;
            } else {
                t_hi = mid;
            }
        }
        return 0.5 * (t_lo + t_hi);
    };
    return detect_impl(times, values, threshold, refiner);
}

// ---------------------------------------------------------------------------
// Grayscale quantization

std::vector<int> quantize_grayscale(const FieldMap& map, int levels,
                                    double v_min, double v_max) {
    if (levels < 2) {
        throw std::invalid_argument("quantize_grayscale: need >= 2 levels");
    }
    if (!(v_min < v_max)) {
        throw std::invalid_argument("quantize_grayscale: v_min must be < v_max");
    }
    const double width = (v_max - v_min) / static_cast<double>(levels);
    std::vector<int> out(map.values.size());
    for (std::size_t i = 0; i < map.values.size(); ++i) {
        const double v = map.values[i];
        int level;
        if (!(v > v_min)) {
            level = 0;
        } else if (v >= v_max) {
            level = levels - 1;
        } else {
            level = std::min(levels - 1,
                             static_cast<int>(std::floor((v - v_min) / width)));
        }
        out[i] = level;
    }
    return out;
}

QuantizationBounds default_quantization(Observable obs) {
    switch (obs) {
        case Observable::zeta: return {0.0, 0.20, 20};
        case Observable::chi: return {0.5, 1.0, 20};
        case Observable::log10_zeta:
            return {std::log10(0.0003), std::log10(0.30), 20};
        case Observable::rho11: return {0.0, 1.0, 20};
    }
    throw std::logic_error("default_quantization: unknown observable");
}

// ---------------------------------------------------------------------------
// Figure presets

namespace {

std::vector<FigurePreset> build_presets() {
    const BlochVector ground{0.0, 0.0, 1.0};
    const GridAxis t4(AxisScale::linear, 0.0, 4.0, 200);
    const GridAxis t10(AxisScale::linear, 0.0, 10.0, 1001);

    std::vector<FigurePreset> presets;

    const auto omega_map = [&](std::string name, Observable obs, double r3t,
                               std::string desc) {
        presets.push_back(FigurePreset{
            std::move(name), std::move(desc), PresetKind::omega_time_map,
            make_params(1.5, 0.5, 1.0, r3t), ground, obs, t4,
            GridAxis(AxisScale::linear, 0.0, 6.0, 200),
            default_quantization(obs), {}, {}});
    };
    omega_map("fig1a", Observable::zeta, 0.0,
              "zeta over (Omega, t), T1=1.5 T2=0.5, infinite temperature");
    omega_map("fig1b", Observable::chi, 0.0,
              "chi over (Omega, t), T1=1.5 T2=0.5, infinite temperature");
    omega_map("fig5a", Observable::zeta, 1.0,
              "zeta over (Omega, t), T1=1.5 T2=0.5, R3_tilde=1");
    omega_map("fig5b", Observable::chi, 1.0,
              "chi over (Omega, t), T1=1.5 T2=0.5, R3_tilde=1");

    const auto logt2_map = [&](std::string name, Observable obs, double t1,
                               std::string desc) {
        presets.push_back(FigurePreset{
            std::move(name), std::move(desc), PresetKind::logt2_time_map,
            make_params(t1, t1 / 2.0, 1.0, 0.0), ground, obs, t4,
            GridAxis(AxisScale::log10, -2.0, std::log10(t1 / 2.0), 200),
            default_quantization(obs), {}, {}});
    };
    logt2_map("fig2a", Observable::log10_zeta, 2.5,
              "log10 zeta over (log10 T2, t), T1=2.5, Omega=1");
    logt2_map("fig2b", Observable::chi, 2.5,
              "chi over (log10 T2, t), T1=2.5, Omega=1");
    logt2_map("fig3", Observable::log10_zeta, 1e4,
              "log10 zeta over (log10 T2, t), T1=1e4, Omega=1");

    const auto omega_family = [](double t1, double t2, double r3t,
                                 const std::vector<double>& omegas) {
        std::vector<std::pair<std::string, SystemParams>> family;
        for (double omega : omegas) {
            std::ostringstream label;
            label << "omega=" << omega;
            family.emplace_back(label.str(), make_params(t1, t2, omega, r3t));
        }
        return family;
    };

    presets.push_back(FigurePreset{
        "fig4a", "rho11(t) for Omega in {0.2, 1, 5}, T1=2.5 T2=0.5",
        PresetKind::series_family, make_params(2.5, 0.5, 1.0, 0.0), ground,
        Observable::rho11, t10, std::nullopt, default_quantization(Observable::rho11),
        omega_family(2.5, 0.5, 0.0, {0.2, 1.0, 5.0}), {Column::rho11}});
    presets.push_back(FigurePreset{
        "fig4b", "rho11(t) for Omega in {0.2, 1, 5}, T1=1e4 T2=0.5",
        PresetKind::series_family, make_params(1e4, 0.5, 1.0, 0.0), ground,
        Observable::rho11, t10, std::nullopt, default_quantization(Observable::rho11),
        omega_family(1e4, 0.5, 0.0, {0.2, 1.0, 5.0}), {Column::rho11}});
    {
        std::vector<std::pair<std::string, SystemParams>> family;
        for (double t2 : {0.05, 0.5, 5.0}) {
            std::ostringstream label;
            label << "t2=" << t2;
            family.emplace_back(label.str(), make_params(1e4, t2, 1.0, 0.0));
        }
        presets.push_back(FigurePreset{
            "fig4c", "rho11(t) for T2 in {0.05, 0.5, 5}, T1=1e4, Omega=1",
            PresetKind::series_family, make_params(1e4, 0.5, 1.0, 0.0), ground,
            Observable::rho11, t10, std::nullopt,
            default_quantization(Observable::rho11), std::move(family),
            {Column::rho11}});
    }
    presets.push_back(FigurePreset{
        "fig6",
        "chi, zeta, rho11 for Omega in {0.5, 1.15, 4}, T1=1.5 T2=0.5, "
        "R3_tilde=1",
        PresetKind::series_family, make_params(1.5, 0.5, 1.15, 1.0), ground,
        Observable::zeta, t10, std::nullopt,
        default_quantization(Observable::zeta),
        omega_family(1.5, 0.5, 1.0, {0.5, 1.15, 4.0}),
        {Column::chi, Column::zeta, Column::rho11}});

    return presets;
}

}  // namespace

const std::vector<FigurePreset>& figure_presets() {
    static const std::vector<FigurePreset> presets = build_presets();
    return presets;
}

const FigurePreset* find_figure_preset(std::string_view name) {
    for (const FigurePreset& preset : figure_presets()) {
        if (preset.name == name) return &preset;
    }
    return nullptr;
}

}  // namespace bloch::sweep
