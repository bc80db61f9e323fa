#include "bloch/io.hpp"

#include <cmath>
#include <cstdio>

#include "bloch/analytic.hpp"

namespace bloch::cli {

std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void write_csv(std::ostream& os, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows) {
    for (std::size_t j = 0; j < header.size(); ++j) {
        if (j) os << ',';
        os << header[j];
    }
    os << '\n';
    for (const auto& row : rows) {
        for (std::size_t j = 0; j < row.size(); ++j) {
            if (j) os << ',';
            os << format_double(row[j]);
        }
        os << '\n';
    }
}

void write_field_map_csv(std::ostream& os, const sweep::FieldMap& map) {
    const char* y_name = map.swept == sweep::SweptParameter::rabi_frequency
                             ? "omega"
                             : "log10_t2";
    os << y_name << ",t," << sweep::observable_name(map.observable) << '\n';
    for (std::size_t iy = 0; iy < map.y_axis.count; ++iy) {
        const std::string y = format_double(map.y_axis.coordinate(iy));
        for (std::size_t ix = 0; ix < map.x_axis.count; ++ix) {
            os << y << ',' << format_double(map.x_axis.coordinate(ix)) << ','
               << format_double(map.at(iy, ix)) << '\n';
        }
    }
}

void write_time_series_csv(std::ostream& os, const sweep::TimeSeries& series,
                           const std::vector<std::string>& labels) {
    os << 't';
    for (std::size_t j = 0; j < series.columns.size(); ++j) {
        os << ',' << sweep::column_name(series.columns[j]);
        if (j < labels.size() && !labels[j].empty()) os << '[' << labels[j] << ']';
    }
    os << '\n';
    for (std::size_t i = 0; i < series.times.size(); ++i) {
        os << format_double(series.times[i]);
        for (double v : series.rows[i]) os << ',' << format_double(v);
        os << '\n';
    }
}

std::uint8_t level_to_gray(int level, int levels) {
    // level 0 = lightest ... levels-1 = darkest = gray 0.
    const int lightness = levels - 1 - level;
    return static_cast<std::uint8_t>(
        std::lround(255.0 * lightness / static_cast<double>(levels)));
}

std::vector<std::uint8_t> render_pgm(const sweep::FieldMap& map,
                                     const sweep::QuantizationBounds& q) {
    const std::vector<int> levels =
        sweep::quantize_grayscale(map, q.levels, q.v_min, q.v_max);
    const std::size_t nx = map.x_axis.count;
    const std::size_t ny = map.y_axis.count;
    std::vector<std::uint8_t> pixels(nx * ny);
    for (std::size_t row = 0; row < ny; ++row) {
        const std::size_t iy = ny - 1 - row;  // top image row = y_max
        for (std::size_t ix = 0; ix < nx; ++ix) {
            pixels[row * nx + ix] = level_to_gray(levels[iy * nx + ix], q.levels);
        }
    }
    return pixels;
}

void write_pgm(std::ostream& os, std::size_t width, std::size_t height,
               const std::vector<std::uint8_t>& pixels) {
    os << "P5\n" << width << ' ' << height << "\n255\n";
    os.write(reinterpret_cast<const char*>(pixels.data()),
             static_cast<std::streamsize>(pixels.size()));
}

nlohmann::json params_json(const SystemParams& p) {
    return {{"t1", p.t1()},         {"t2", p.t2()},
            {"omega", p.omega()},   {"delta", p.delta()},
            {"phi", p.phi()},       {"r3_tilde", p.r3_tilde()}};
}

nlohmann::json bloch_json(const BlochVector& r) {
    return {{"r1", r.r1}, {"r2", r.r2}, {"r3", r.r3}};
}

nlohmann::json density_json(const DensityMatrix& rho) {
    return {{"rho11", rho.rho11},
            {"rho22", rho.rho22},
            {"rho12_re", rho.rho12.real()},
            {"rho12_im", rho.rho12.imag()},
            {"rho12_abs", std::abs(rho.rho12)}};
}

nlohmann::json axis_json(const sweep::GridAxis& axis) {
    return {{"scale", axis.scale == sweep::AxisScale::log10 ? "log10" : "linear"},
            {"min", axis.min},
            {"max", axis.max},
            {"count", axis.count}};
}

nlohmann::json revival_json(const sweep::RevivalReport& report) {
    nlohmann::json intervals = nlohmann::json::array();
    for (const auto& interval : report.intervals) {
        intervals.push_back({{"t_start", interval.t_start},
                             {"t_end", interval.t_end},
                             {"reaches_horizon", interval.reaches_horizon}});
    }
    return {{"threshold", report.threshold},
            {"observable", sweep::observable_name(report.observable)},
            {"intervals", intervals}};
}

}  // namespace bloch::cli
