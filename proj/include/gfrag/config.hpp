#pragma once

#include <iosfwd>
#include <optional>
#include <string>

#include "gfrag/grid.hpp"
#include "gfrag/profile.hpp"
#include "gfrag/rate.hpp"

#include "json.hpp"

namespace gfrag {

/// B(x) = K x^gamma, or a two-column table file interpolated in log-log scale.
struct RateSpec {
    std::string kind = "power_law";
    double K = 1.0;
    double gamma = 2.0;
    std::string table_file;
};

struct ProfileSpec {
    std::string kind = "peak";
    double center = 2.0;
    double width_octaves = 0.125;
};

/// Every key of the key = value config format, with defaults.
struct RunConfig {
    int n = 32;
    /// 0 selects the largest stable N <= 8n.
    int N = 0;
    RateSpec rate;
    KernelMode mode = KernelMode::standard;
    ProfileSpec profile;
    /// Horizon in multiples of log 2.
    double horizon_periods = 12.0;
    int K_modes = 16;
    std::string out_dir = "gfrag_out";
    /// Snapshot every this many steps (0: initial only).
    std::size_t snapshot_every = 4;
    std::string variant = "exact";
    double cfl_fraction = 0.9;
    double perron_tolerance = 1e-12;
};

/// Sets one key; throws InvalidArgument on unknown keys or malformed values.
void apply_setting(RunConfig& config, const std::string& key, const std::string& value);
/// Lines "key = value"; '#' starts a comment.
RunConfig parse_config(std::istream& in);
RunConfig load_config(const std::string& path);
/// Rejects inconsistent values (n < 1, negative horizon, unknown variant, ...).
void validate(const RunConfig& config);

nlohmann::json to_json(const RunConfig& config);

Profile make_profile(const ProfileSpec& spec);

struct Setup {
    GeometricGrid grid;
    DivisionRate rate;
};

/// Resolves N and checks the stability certificate; throws StabilityError with hints.
Setup build_setup(const RunConfig& config);
/// Same rate with the opposite or given kernel mode on the same grid.
DivisionRate make_rate(const RunConfig& config, const GeometricGrid& grid, KernelMode mode);

}  // namespace gfrag
