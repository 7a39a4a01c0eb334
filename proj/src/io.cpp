#include "gfrag/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

#include "gfrag/errors.hpp"

namespace gfrag::io {

namespace {

std::ofstream open_for_write(const fs::path& path) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream out(path);
    if (!out) throw Error("cannot write '" + path.string() + "'");
    return out;
}

}  // namespace

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_snapshots_csv(const fs::path& path, const Trajectory& traj) {
    auto out = open_for_write(path);
    out << "t,x,re_u,im_u,re_u_rescaled,im_u_rescaled\n";
    for (const auto& s : traj.snapshots) {
        const double scale = std::exp(-traj.rescale_rate * s.time);
        for (std::size_t k = 0; k < s.values.size(); ++k) {
            const Complex v = s.values[k];
            out << format_double(s.time) << ',' << format_double(traj.grid.x(k)) << ',' << format_double(v.real())
                << ',' << format_double(v.imag()) << ',' << format_double(v.real() * scale) << ','
                << format_double(v.imag() * scale) << '\n';
        }
    }
}

void write_series_csv(const fs::path& path, const Trajectory& traj) {
    auto out = open_for_write(path);
    out << "t,max_rescaled,first_moment,e2_norm,d2,mass_leak\n";
    for (const auto& s : traj.series) {
        out << format_double(s.time) << ',' << format_double(s.max_rescaled) << ',' << format_double(s.first_moment)
            << ',' << format_double(s.e2_norm) << ',' << format_double(s.d2) << ',' << format_double(s.mass_leak)
            << '\n';
    }
}

void write_grid_function_csv(const fs::path& path, const GeometricGrid& grid, std::span<const Complex> values) {
    if (values.size() != grid.size()) throw InvalidArgument("csv: length mismatch");
    auto out = open_for_write(path);
    out << "x,re,im\n";
    for (std::size_t k = 0; k < values.size(); ++k) {
        out << format_double(grid.x(k)) << ',' << format_double(values[k].real()) << ','
            << format_double(values[k].imag()) << '\n';
    }
}

void write_coefficients_csv(const fs::path& path, const ModeCoefficients& coeffs) {
    auto out = open_for_write(path);
    out << "k,re,im,abs\n";
    for (int k = -coeffs.K; k <= coeffs.K; ++k) {
        const Complex c = coeffs.at(k);
        out << k << ',' << format_double(c.real()) << ',' << format_double(c.imag()) << ','
            << format_double(std::abs(c)) << '\n';
    }
}

void write_columns_csv(const fs::path& path, const std::vector<std::string>& header,
                       const std::vector<std::vector<double>>& columns) {
    if (header.size() != columns.size()) throw InvalidArgument("csv: header/column count mismatch");
    const std::size_t rows = columns.empty() ? 0 : columns.front().size();
    for (const auto& c : columns) {
        if (c.size() != rows) throw InvalidArgument("csv: ragged columns");
    }
    auto out = open_for_write(path);
    for (std::size_t i = 0; i < header.size(); ++i) out << (i ? "," : "") << header[i];
    out << '\n';
    for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t i = 0; i < columns.size(); ++i) out << (i ? "," : "") << format_double(columns[i][r]);
        out << '\n';
    }
}

void write_json(const fs::path& path, const nlohmann::json& j) {
    auto out = open_for_write(path);
    out << j.dump(2) << '\n';
}

nlohmann::json grid_metadata(const GeometricGrid& grid) {
    return {{"n", grid.subdivisions()},
            {"N", grid.half_extent()},
            {"points", grid.size()},
            {"dx", grid.dx_rel()},
            {"dt", grid.dt()},
            {"x_min", grid.x_min()},
            {"x_max", grid.x_max()}};
}

nlohmann::json perron_metadata(const PerronSolution& p) {
    return {{"mode", to_string(p.mode)},
            {"eigenvalue", p.lambda},
            {"discrete_rate", p.discrete_rate},
            {"normalization_error", p.normalization_error},
            {"residual", p.residual},
            {"windows", p.windows},
            {"last_window_change", p.last_window_change}};
}

}  // namespace gfrag::io
