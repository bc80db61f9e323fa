// io.hpp — CSV, PGM, and JSON emission for the command-line front end.

#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "bloch/sweep.hpp"
#include "bloch/types.hpp"

namespace bloch::cli {

// Shortest-width formatting with 17 significant digits: every finite double
// re-parses to the same bits.
std::string format_double(double v);

// Comma-separated, LF line endings, header row first.
void write_csv(std::ostream& os, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows);

// Long-format grid CSV: one row per cell, columns (y, t, observable).
void write_field_map_csv(std::ostream& os, const sweep::FieldMap& map);

// Time-series CSV with one column per (column, label) pair.
void write_time_series_csv(std::ostream& os, const sweep::TimeSeries& series,
                           const std::vector<std::string>& labels);

// Binary P5 graymap, maxval 255. Rows run from y_max down to y_min so the
// y axis increases upward; level k of n maps to gray round(255*(n-1-k)/n),
// darkest = 0.
std::vector<std::uint8_t> render_pgm(const sweep::FieldMap& map,
                                     const sweep::QuantizationBounds& q);
void write_pgm(std::ostream& os, std::size_t width, std::size_t height,
               const std::vector<std::uint8_t>& pixels);

std::uint8_t level_to_gray(int level, int levels);

// JSON metadata fragments.
nlohmann::json params_json(const SystemParams& p);
nlohmann::json bloch_json(const BlochVector& r);
nlohmann::json density_json(const DensityMatrix& rho);
nlohmann::json axis_json(const sweep::GridAxis& axis);
nlohmann::json revival_json(const sweep::RevivalReport& report);

inline constexpr const char* kSoftwareVersion = "blochsim 1.0.0";

}  // namespace bloch::cli
