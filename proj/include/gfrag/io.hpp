#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "gfrag/grid.hpp"
#include "gfrag/scheme.hpp"
#include "gfrag/spectral.hpp"

#include "json.hpp"

namespace gfrag::io {

namespace fs = std::filesystem;

/// Columns t, x, re_u, im_u, re_u_rescaled, im_u_rescaled; one row per grid point per snapshot.
void write_snapshots_csv(const fs::path& path, const Trajectory& trajectory);
/// Columns t, max_rescaled, first_moment, e2_norm, d2, mass_leak.
void write_series_csv(const fs::path& path, const Trajectory& trajectory);
/// Columns x, re, im.
void write_grid_function_csv(const fs::path& path, const GeometricGrid& grid, std::span<const Complex> values);
/// Columns k, re, im, abs.
void write_coefficients_csv(const fs::path& path, const ModeCoefficients& coeffs);
/// Columns x then one per named column (all real).
void write_columns_csv(const fs::path& path, const std::vector<std::string>& header,
                       const std::vector<std::vector<double>>& columns);
void write_json(const fs::path& path, const nlohmann::json& j);

nlohmann::json grid_metadata(const GeometricGrid& grid);
nlohmann::json perron_metadata(const PerronSolution& perron);

/// Shortest-round-trip-safe decimal: 17 significant digits.
std::string format_double(double v);

}  // namespace gfrag::io
