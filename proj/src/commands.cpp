#include "gfrag/commands.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <numbers>

#include "gfrag/diagnostics.hpp"
#include "gfrag/errors.hpp"
#include "gfrag/io.hpp"
#include "gfrag/scheme.hpp"
#include "gfrag/spectral.hpp"

namespace gfrag::cli {

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

constexpr double kLn2 = std::numbers::ln2;

int clamp_modes(const RunConfig& c, const GeometricGrid& grid, json& notes) {
    const int K = std::min(c.K_modes, max_resolvable_modes(grid));
    if (K < c.K_modes) {
        notes.push_back("K_modes reduced from " + std::to_string(c.K_modes) + " to " + std::to_string(K) +
                        ": higher modes alias on a grid with n = " + std::to_string(grid.subdivisions()));
    }
    return K;
}

PerronSolution solve_perron(const RunConfig& c, const DivisionRate& rate) {
    PerronOptions opts;
    opts.tolerance = c.perron_tolerance;
    return perron_eigenvector(rate, opts);
}

json oscillation_json(const Trajectory& traj) {
    try {
        const auto m = oscillation_metrics(traj);
        return {{"period", m.period},
                {"amplitude_slope", m.amplitude_slope},
                {"mean_amplitude", m.mean_amplitude},
                {"peaks", m.peak_times.size()}};
    } catch (const InvalidArgument& e) {
        return {{"error", e.what()}};
    }
}

struct RunArtifacts {
    Trajectory traj;
    double final_attractor_distance;
};

RunArtifacts simulate_variant(const RunConfig& c, const Setup& setup, const PerronSolution& perron,
                              const StateVector& u0, const ModeCoefficients& coeffs, const std::string& variant,
                              const RunOptions& base) {
    RunOptions opts = base;
    opts.hook = entropy_hook(perron, setup.rate);
    const double horizon = c.horizon_periods * kLn2;
    Trajectory traj = variant == "diffusive" ? diffusive_reference_run(u0, setup.rate, c.cfl_fraction, horizon, opts)
                                             : run(u0, setup.rate, horizon, opts);
    const double d = attractor_distance(traj.final_state, coeffs, perron);
    return {std::move(traj), d};
}

json trajectory_json(const RunArtifacts& a) {
    const auto& t = a.traj;
    double drift = 0.0;
    const double m0 = t.series.front().first_moment;
    for (const auto& s : t.series) drift = std::max(drift, std::abs(s.first_moment - m0));
    return {{"variant", t.variant},
            {"dt", t.dt},
            {"cfl_fraction", t.cfl_fraction},
            {"rescale_rate", t.rescale_rate},
            {"steps", t.steps},
            {"snapshots", t.snapshots.size()},
            {"mass_leak", t.mass_leak},
            {"final_max_rescaled", t.series.back().max_rescaled},
            {"max_moment_drift", drift},
            {"relative_moment_drift", m0 != 0.0 ? drift / std::abs(m0) : 0.0},
            {"final_attractor_distance", a.final_attractor_distance},
            {"oscillation", oscillation_json(t)}};
}

void write_run(const fs::path& dir, const RunArtifacts& a) {
    io::write_snapshots_csv(dir / "snapshots.csv", a.traj);
    io::write_series_csv(dir / "series.csv", a.traj);
}

json base_summary(const RunConfig& c, const Setup& setup) {
    return {{"config", to_json(c)}, {"grid", io::grid_metadata(setup.grid)}, {"rate", setup.rate.description()},
            {"stability_number", setup.rate.stability_number()}, {"notes", json::array()}};
}

std::vector<double> real_parts(std::span<const Complex> v) {
    std::vector<double> out(v.size());
    for (std::size_t k = 0; k < v.size(); ++k) out[k] = v[k].real();
    return out;
}

double mean_amplitude_after(const Trajectory& t, double burn_in) {
    // peak-to-trough amplitude when peaks exist, else the plain range after burn-in
    try {
        return oscillation_metrics(t).mean_amplitude;
    } catch (const InvalidArgument&) {
        double lo = kInfinity, hi = -kInfinity;
        for (const auto& s : t.series) {
            if (s.time < burn_in) continue;
            lo = std::min(lo, s.max_rescaled);
            hi = std::max(hi, s.max_rescaled);
        }
        return hi >= lo ? hi - lo : 0.0;
    }
}

}  // namespace

int exit_code_for(const std::exception& e) {
    if (dynamic_cast<const StabilityError*>(&e) != nullptr) return kExitConfig;
    if (dynamic_cast<const InvalidArgument*>(&e) != nullptr) return kExitConfig;
    if (dynamic_cast<const NumericalError*>(&e) != nullptr) return kExitNumerical;
    return kExitFailure;
}

int sign_changes(std::span<const Complex> values, double tol) {
    double m = 0.0;
    for (const auto& v : values) m = std::max(m, std::abs(v.real()));
    int changes = 0;
    int last = 0;
    for (const auto& v : values) {
        if (std::abs(v.real()) <= tol * m) continue;
        const int s = v.real() > 0 ? 1 : -1;
        if (last != 0 && s != last) ++changes;
        last = s;
    }
    return changes;
}

double relative_jump(std::span<const Complex> u, const PerronSolution& perron) {
    const double cut = std::max(perron.floor, 1e-6) * perron.max_value();
    double jump = 0.0, top = 0.0;
    bool have_prev = false;
    Complex prev{};
    for (std::size_t k = 1; k < u.size(); ++k) {
        if (perron.U[k] < cut) {
            have_prev = false;
            continue;
        }
        const Complex r = u[k] / perron.U[k];
        top = std::max(top, std::abs(r));
        if (have_prev) jump = std::max(jump, std::abs(r - prev));
        prev = r;
        have_prev = true;
    }
    return top > 0.0 ? jump / top : 0.0;
}

json cmd_simulate(const RunConfig& c) {
    const Setup setup = build_setup(c);
    json summary = base_summary(c, setup);
    const fs::path dir = c.out_dir;

    const auto perron = solve_perron(c, setup.rate);
    const auto u0 = sample_initial(make_profile(c.profile), setup.grid);
    const int K = clamp_modes(c, setup.grid, summary["notes"]);
    const auto coeffs = project(u0, perron, K);

    RunOptions opts;
    opts.snapshot_every = c.snapshot_every;
    const auto art = simulate_variant(c, setup, perron, u0, coeffs, c.variant, opts);
    write_run(dir, art);

    summary["perron"] = io::perron_metadata(perron);
    summary["K_modes"] = K;
    summary["run"] = trajectory_json(art);
    summary["mass_leak"] = art.traj.mass_leak;
    summary["metrics"] = summary["run"]["oscillation"];
    io::write_json(dir / "summary.json", summary);
    return summary;
}

json cmd_eigen(const RunConfig& c) {
    const Setup setup = build_setup(c);
    json summary = base_summary(c, setup);
    const fs::path dir = c.out_dir;

    const auto perron = solve_perron(c, setup.rate);
    io::write_grid_function_csv(dir / "perron.csv", setup.grid, dominant_mode(perron, 0));
    for (int k : {1, 2}) {
        if (k > max_resolvable_modes(setup.grid)) break;
        io::write_grid_function_csv(dir / ("mode_" + std::to_string(k) + ".csv"), setup.grid,
                                    dominant_mode(perron, k));
    }
    summary["perron"] = io::perron_metadata(perron);

    if (c.mode == KernelMode::conservative) {
        // compare with x U of the standard kernel on the central 80% of cells
        const auto standard = solve_perron(c, make_rate(c, setup.grid, KernelMode::standard));
        const std::size_t size = setup.grid.size();
        const std::size_t lo = size / 10, hi = size - size / 10;
        double rmin = kInfinity, rmax = -kInfinity;
        for (std::size_t k = std::max<std::size_t>(lo, 1); k < hi; ++k) {
            const double r = perron.U[k] / (setup.grid.x(k) * standard.U[k]);
            rmin = std::min(rmin, r);
            rmax = std::max(rmax, r);
        }
        summary["ratio_to_x_U_standard"] = {{"min", rmin}, {"max", rmax}, {"spread", rmax / rmin - 1.0}};
    }
    io::write_json(dir / "eigen.json", summary);
    return summary;
}

json cmd_project(const RunConfig& c) {
    const Setup setup = build_setup(c);
    json summary = base_summary(c, setup);
    const fs::path dir = c.out_dir;

    const auto perron = solve_perron(c, setup.rate);
    const auto u0 = sample_initial(make_profile(c.profile), setup.grid);
    const int K = clamp_modes(c, setup.grid, summary["notes"]);
    const auto coeffs = project(u0, perron, K);
    io::write_coefficients_csv(dir / "coefficients.csv", coeffs);

    summary["perron"] = io::perron_metadata(perron);
    summary["K_modes"] = K;
    summary["norm_sq"] = coeffs.norm_sq;
    summary["energy"] = coeffs.energy();
    summary["bessel_slack"] = coeffs.bessel_slack;
    summary["gram_defect"] = coeffs.gram_defect;
    io::write_json(dir / "project.json", summary);
    return summary;
}

json cmd_compare_schemes(const RunConfig& c) {
    if (!(c.cfl_fraction > 0.0 && c.cfl_fraction < 1.0))
        throw InvalidArgument("compare-schemes: cfl_fraction must lie in (0, 1)");
    const Setup setup = build_setup(c);
    json summary = base_summary(c, setup);
    const fs::path dir = c.out_dir;

    const auto perron = solve_perron(c, setup.rate);
    const auto u0 = sample_initial(make_profile(c.profile), setup.grid);
    const int K = clamp_modes(c, setup.grid, summary["notes"]);
    const auto coeffs = project(u0, perron, K);

    RunOptions opts;
    opts.snapshot_every = c.snapshot_every;
    auto launch = [&](const std::string& variant) {
        return std::async(std::launch::async,
                          [&, variant] { return simulate_variant(c, setup, perron, u0, coeffs, variant, opts); });
    };
    auto exact_f = launch("exact");
    auto diffusive_f = launch("diffusive");
    const auto exact = exact_f.get();
    const auto diffusive = diffusive_f.get();

    write_run(dir / "exact", exact);
    write_run(dir / "diffusive", diffusive);

    summary["perron"] = io::perron_metadata(perron);
    summary["exact"] = trajectory_json(exact);
    summary["diffusive"] = trajectory_json(diffusive);
    summary["initial_snapshots_identical"] =
        exact.traj.snapshots.front().values == diffusive.traj.snapshots.front().values;
    summary["mass_leak"] = {{"exact", exact.traj.mass_leak}, {"diffusive", diffusive.traj.mass_leak}};
    io::write_json(dir / "comparison.json", summary);
    return summary;
}

json cmd_reproduce_figures(const RunConfig& c) {
    const Setup setup = build_setup(c);
    const auto& grid = setup.grid;
    const fs::path dir = c.out_dir;
    const auto perron = solve_perron(c, setup.rate);
    json figures = base_summary(c, setup);
    figures["perron"] = io::perron_metadata(perron);

    std::vector<double> xs(grid.points().begin(), grid.points().end());

    // figure 1: real parts of the first three dominant modes
    {
        json meta;
        std::vector<std::vector<double>> cols{xs};
        std::vector<std::string> header{"x"};
        for (int k = 0; k <= 2; ++k) {
            const auto mode = dominant_mode(perron, k);
            cols.push_back(real_parts(mode));
            header.push_back("re_U" + std::to_string(k));
            const auto& re = cols.back();
            meta["re_U" + std::to_string(k)] = {{"sign_changes", sign_changes(mode)},
                                                {"min", *std::min_element(re.begin() + 1, re.end())},
                                                {"max", *std::max_element(re.begin(), re.end())}};
        }
        io::write_columns_csv(dir / "figure1" / "modes.csv", header, cols);
        io::write_json(dir / "figure1" / "metadata.json", meta);
        figures["figure1"] = meta;
    }

    const Profile profiles[2] = {Profile::smooth(), make_profile(ProfileSpec{})};
    const std::string names[2] = {"smooth", "peak"};
    StateVector initial[2] = {sample_initial(profiles[0], grid), sample_initial(profiles[1], grid)};

    // figure 2: both initial conditions
    {
        io::write_columns_csv(dir / "figure2" / "initial_conditions.csv", {"x", "smooth", "peak"},
                              {xs, real_parts(initial[0].values()), real_parts(initial[1].values())});
        json meta = {{"smooth", {{"relative_jump", relative_jump(initial[0].values(), perron)}}},
                     {"peak", {{"relative_jump", relative_jump(initial[1].values(), perron)}}}};
        io::write_json(dir / "figure2" / "metadata.json", meta);
        figures["figure2"] = meta;
    }

    // figures 3 and 4 share one exact run per initial condition
    const double periods = std::max(c.horizon_periods, 3.0);
    std::vector<double> snap_times;
    for (int j = 0; j < 5; ++j) snap_times.push_back((periods - 1.0) * kLn2 + j * kLn2 / 5.0);
    RunOptions opts;
    opts.snapshot_times = snap_times;
    auto launch = [&](int i) {
        return std::async(std::launch::async,
                          [&, i] { return run(initial[i], setup.rate, periods * kLn2, opts); });
    };
    auto f0 = launch(0);
    auto f1 = launch(1);
    const Trajectory runs[2] = {f0.get(), f1.get()};

    {
        std::vector<double> t, s0, s1;
        for (std::size_t l = 0; l < runs[0].series.size(); ++l) {
            t.push_back(runs[0].series[l].time);
            s0.push_back(runs[0].series[l].max_rescaled);
            s1.push_back(runs[1].series[l].max_rescaled);
        }
        io::write_columns_csv(dir / "figure3" / "max_series.csv", {"t", "smooth", "peak"}, {t, s0, s1});
        const double burn = 2.0 * kLn2;
        const double a_smooth = mean_amplitude_after(runs[0], burn);
        const double a_peak = mean_amplitude_after(runs[1], burn);
        json meta = {{"smooth", {{"mean_amplitude", a_smooth}, {"oscillation", oscillation_json(runs[0])}}},
                     {"peak", {{"mean_amplitude", a_peak}, {"oscillation", oscillation_json(runs[1])}}},
                     {"amplitude_ratio_smooth_over_peak", a_peak > 0.0 ? a_smooth / a_peak : 0.0}};
        io::write_json(dir / "figure3" / "metadata.json", meta);
        figures["figure3"] = meta;
    }

    {
        json meta;
        for (int i = 0; i < 2; ++i) {
            std::vector<std::vector<double>> cols{xs};
            std::vector<std::string> header{"x"};
            json jumps = json::array();
            json times = json::array();
            // the initial snapshot comes first; the five requested ones follow
            for (std::size_t s = 1; s < runs[i].snapshots.size(); ++s) {
                const auto& snap = runs[i].snapshots[s];
                const double scale = std::exp(-runs[i].rescale_rate * snap.time);
                GridFunction r(snap.values.size());
                for (std::size_t k = 0; k < r.size(); ++k) r[k] = snap.values[k] * scale;
                cols.push_back(real_parts(r));
                header.push_back("t=" + io::format_double(snap.time));
                jumps.push_back(relative_jump(r, perron));
                times.push_back(snap.time);
            }
            io::write_columns_csv(dir / "figure4" / ("snapshots_" + names[i] + ".csv"), header, cols);
            meta[names[i]] = {{"times", times}, {"relative_jump", jumps}};
        }
        io::write_json(dir / "figure4" / "metadata.json", meta);
        figures["figure4"] = meta;
    }

    io::write_json(dir / "figures.json", figures);
    return figures;
}

}  // namespace gfrag::cli
