// sweep.hpp — parameter-grid evaluation of the closed-form solution:
// (Omega x t) and (log10 T2 x t) field maps, time-series extraction,
// grayscale quantization, coherence-revival detection, and the built-in
// figure presets.

#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "bloch/types.hpp"

namespace bloch::sweep {

// ---------------------------------------------------------------------------
// Grid axes

enum class AxisScale { linear, log10 };

// Evenly spaced samples in the axis's own scale. For a log10 axis the
// bounds and coordinates are the log10 values; physical() maps back.
struct GridAxis {
    AxisScale scale;
    double min;
    double max;
    std::size_t count;

    GridAxis(AxisScale scale_, double min_, double max_, std::size_t count_);

    double coordinate(std::size_t i) const;
    double physical(std::size_t i) const;
    double step() const { return (max - min) / static_cast<double>(count - 1); }
};

// ---------------------------------------------------------------------------
// Observables

enum class Observable { zeta, chi, log10_zeta, rho11 };

double observable_value(Observable obs, const BlochVector& r);
const char* observable_name(Observable obs);
std::optional<Observable> parse_observable(std::string_view name);

// ---------------------------------------------------------------------------
// Field maps

enum class SweptParameter { rabi_frequency, log10_t2 };

struct FieldMap {
    GridAxis x_axis;  // time
    GridAxis y_axis;  // Omega or log10 T2
    Observable observable;
    SweptParameter swept;
    SystemParams base;      // held-fixed parameters (swept field ignored)
    BlochVector initial;
    std::vector<double> values;  // row-major, values[iy * nx + ix]

    double at(std::size_t iy, std::size_t ix) const {
        return values[iy * x_axis.count + ix];
    }
};

// Evaluates the closed-form solution over the grid; rows are independent
// work items handled by `workers` threads (0 = hardware concurrency).
// Output is position-deterministic regardless of the worker count.
FieldMap sweep_omega_time(const SystemParams& base, const GridAxis& omega_axis,
                          const GridAxis& time_axis, Observable obs,
                          const BlochVector& r0, unsigned workers = 0);

// As above with T2 varied per row; the axis upper bound must respect the
// complete-positivity cap log10(T1/2).
FieldMap sweep_logT2_time(const SystemParams& base, const GridAxis& logt2_axis,
                          const GridAxis& time_axis, Observable obs,
                          const BlochVector& r0, unsigned workers = 0);

// ---------------------------------------------------------------------------
// Time series

enum class Backend { analytic, numeric };

enum class Column { r1, r2, r3, rho11, rho22, chi, zeta };

const char* column_name(Column c);

struct TimeSeries {
    std::vector<double> times;
    std::vector<Column> columns;
    std::vector<std::vector<double>> rows;  // rows[i][j] = column j at times[i]

    std::vector<double> column_values(Column c) const;
};

// Samples the requested observables along the time axis. The analytic
// backend requires Delta = 0; the numeric backend integrates the full
// equations (any Delta) with RK4 steps aligned to the axis spacing and
// requires a linear axis starting at 0.
TimeSeries time_series(const SystemParams& p, const BlochVector& r0,
                       const GridAxis& time_axis,
                       const std::vector<Column>& columns,
                       Backend backend = Backend::analytic);

// ---------------------------------------------------------------------------
// Revival detection

// Maximal intervals on which the observable sits at or above the threshold,
// occurring after the first downward crossing. An interval reaching the end
// of the data persists to the horizon.
struct RevivalReport {
    struct Interval {
        double t_start;
        double t_end;
        bool reaches_horizon;
    };
    std::vector<Interval> intervals;
    double threshold = 0.0;
    Observable observable = Observable::zeta;
};

// Default detection threshold: well below the first visual shading boundary
// (0.01) of the grayscale maps.
inline constexpr double kDefaultRevivalThreshold = 1e-3;

// Tabulated series; crossing times are refined by linear interpolation
// between the bracketing samples. Throws std::invalid_argument when empty.
RevivalReport detect_revivals(const std::vector<double>& times,
                              const std::vector<double>& series,
                              double threshold);

// Continuous signal scanned on `samples` points over the axis; crossing
// times are refined by bisection on f. The sampling must be dense enough to
// bracket every crossing.
RevivalReport detect_revivals(const std::function<double(double)>& f,
                              const GridAxis& time_axis, double threshold);

// ---------------------------------------------------------------------------
// Grayscale quantization

// Floor-binned level index per cell: 0 (lightest, value <= v_min) through
// levels-1 (darkest, value >= v_max). Bin k covers
// [v_min + k w, v_min + (k+1) w) with w = (v_max - v_min)/levels.
std::vector<int> quantize_grayscale(const FieldMap& map, int levels,
                                    double v_min, double v_max);

struct QuantizationBounds {
    double v_min;
    double v_max;
    int levels = 20;
};

// Figure defaults: zeta maps span [0, 0.20], chi maps [0.5, 1], log10 zeta
// maps [log10(0.0003), log10(0.30)], 20 levels each.
QuantizationBounds default_quantization(Observable obs);

// ---------------------------------------------------------------------------
// Figure presets (data, not code)

enum class PresetKind { omega_time_map, logt2_time_map, series_family };

struct FigurePreset {
    std::string name;
    std::string description;
    PresetKind kind;
    SystemParams base;
    BlochVector initial;
    Observable observable;           // map observable (maps only)
    GridAxis time_axis;
    std::optional<GridAxis> y_axis;  // maps only
    QuantizationBounds quantization; // maps only
    // series families: one curve per (label, params) pair
    std::vector<std::pair<std::string, SystemParams>> family;
    std::vector<Column> columns;     // series only
};

const std::vector<FigurePreset>& figure_presets();
const FigurePreset* find_figure_preset(std::string_view name);

}  // namespace bloch::sweep
