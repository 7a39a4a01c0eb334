#include "gfrag/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "gfrag/errors.hpp"

namespace gfrag {

namespace {

constexpr double kTwoPiOverLn2 = 2.0 * std::numbers::pi / std::numbers::ln2;

void require_same_grid(const GeometricGrid& a, const GeometricGrid& b, const char* what) {
    if (!a.same_as(b)) throw InvalidArgument(std::string(what) + ": grids differ");
}

Complex rescale_factor(double lambda, int k, double t) {
    // e^{-lambda_k t}, lambda_k = lambda + 2 i pi k/log 2
    return std::exp(Complex{-lambda * t, -kTwoPiOverLn2 * k * t});
}

GridFunction rescaled_values(const StateVector& u, const PerronSolution& perron) {
    return u.rescaled(perron.lambda);
}

}  // namespace

double weighted_norm(std::span<const Complex> u, const PerronSolution& perron, double p) {
    const auto& grid = perron.grid;
    if (u.size() != grid.size()) throw InvalidArgument("weighted norm: length mismatch");
    if (!(p >= 1.0)) throw InvalidArgument("weighted norm: p must be >= 1");
    const double cut = perron.floor * perron.max_value();
    if (std::isinf(p)) {
        double m = 0.0;
        for (std::size_t k = 1; k < u.size(); ++k) {
            if (perron.U[k] > 0.0 && perron.U[k] >= cut) m = std::max(m, std::abs(u[k]) / perron.U[k]);
        }
        return m;
    }
    double s = 0.0;
    for (std::size_t k = 1; k < u.size(); ++k) {
        const double Uk = perron.U[k];
        if (!(Uk > 0.0) || Uk < cut) continue;
        const double a = std::abs(u[k]);
        if (a == 0.0) continue;
        // |u|^p U^{1-p} = U (|u|/U)^p
        s += grid.width(k) * perron.phi(k) * Uk * std::pow(a / Uk, p);
    }
    return std::pow(s, 1.0 / p);
}

double weighted_norm(const StateVector& u, const PerronSolution& perron, double p) {
    require_same_grid(u.grid(), perron.grid, "weighted norm");
    return weighted_norm(u.values(), perron, p);
}

double entropy_dissipation_D2(std::span<const Complex> u, const PerronSolution& perron, const DivisionRate& rate) {
    const auto& grid = perron.grid;
    require_same_grid(rate.grid(), grid, "D2");
    if (u.size() != grid.size()) throw InvalidArgument("D2: length mismatch");
    const std::size_t n = static_cast<std::size_t>(grid.subdivisions());
    const double cut = perron.floor * perron.max_value();
    double s = 0.0;
    for (std::size_t k = n; k < u.size(); ++k) {
        const double Uk = perron.U[k];
        const double Uh = perron.U[k - n];
        if (!(Uk > 0.0) || !(Uh > 0.0) || Uk < cut || Uh < cut) continue;
        const Complex diff = u[k] / Uk - u[k - n] / Uh;
        s += grid.width(k) * perron.phi(k) * rate.sample(k) * Uk * std::norm(diff);
    }
    return s;
}

double entropy_dissipation_D2(const StateVector& u, const PerronSolution& perron, const DivisionRate& rate) {
    require_same_grid(u.grid(), perron.grid, "D2");
    return entropy_dissipation_D2(u.values(), perron, rate);
}

EntropyFunction quadratic_entropy() {
    return {"quadratic", [](Complex z) { return std::norm(z); }};
}

EntropyFunction modulus_entropy() {
    return {"modulus", [](Complex z) { return std::abs(z); }};
}

EntropyFunction hinge_entropy(double C) {
    return {"hinge", [C](Complex z) { return std::max(std::abs(z) - C, 0.0); }};
}

double gre_functional(const StateVector& u, const PerronSolution& perron, const EntropyFunction& H,
                      double rescale_rate) {
    require_same_grid(u.grid(), perron.grid, "GRE");
    const auto& grid = perron.grid;
    const double r = std::isnan(rescale_rate) ? perron.lambda : rescale_rate;
    const double growth = std::exp(r * u.time());
    double s = 0.0;
    for (std::size_t k = 1; k < u.size(); ++k) {
        const double Uk = perron.U[k];
        const double weight = grid.width(k) * perron.phi(k) * Uk;
        // H(u/U) is finite wherever U > 0; a zero profile cell carries zero weight anyway
        if (!(Uk > 0.0)) continue;
        s += weight * H.H(u[k] / (Uk * growth));
    }
    return s;
}

std::vector<DriftPoint> balance_drift(const Trajectory& trajectory, int k) {
    std::vector<DriftPoint> out;
    const double lambda = trajectory.rescale_rate;
    if (k == 0 && !trajectory.series.empty()) {
        const double m0 = trajectory.series.front().first_moment;
        out.reserve(trajectory.series.size());
        for (const auto& s : trajectory.series) out.push_back({s.time, std::abs(s.first_moment - m0)});
        return out;
    }
    if (trajectory.snapshots.empty()) throw InvalidArgument("balance drift: trajectory has no snapshots");
    const auto& grid = trajectory.grid;
    const Complex m0 = adjoint_moment(trajectory.snapshots.front().values, k, grid, trajectory.mode);
    for (const auto& snap : trajectory.snapshots) {
        const Complex m = adjoint_moment(snap.values, k, grid, trajectory.mode) * rescale_factor(lambda, k, snap.time);
        out.push_back({snap.time, std::abs(m - m0)});
    }
    return out;
}

double attractor_distance(const StateVector& u_t, const ModeCoefficients& coeffs, const PerronSolution& perron) {
    require_same_grid(u_t.grid(), perron.grid, "attractor distance");
    const auto target = periodic_limit_eval(coeffs, perron, u_t.time());
    auto r = rescaled_values(u_t, perron);
    for (std::size_t k = 0; k < r.size(); ++k) r[k] -= target[k];
    return weighted_norm(r, perron, 2.0);
}

GridFunction cesaro_average(const Trajectory& trajectory) {
    const auto& snaps = trajectory.snapshots;
    if (snaps.size() < 2) throw InvalidArgument("cesaro average: need at least two snapshots");
    const double T = snaps.back().time - snaps.front().time;
    if (!(T > 0.0)) throw InvalidArgument("cesaro average: empty time window");
    GridFunction avg(snaps.front().values.size(), Complex{0.0, 0.0});
    for (std::size_t i = 0; i + 1 < snaps.size(); ++i) {
        const double dt = snaps[i + 1].time - snaps[i].time;
        const double w = dt * std::exp(-trajectory.rescale_rate * snaps[i].time) / T;
        for (std::size_t k = 0; k < avg.size(); ++k) avg[k] += w * snaps[i].values[k];
    }
    return avg;
}

OscillationMetrics oscillation_metrics(const std::vector<double>& times, const std::vector<double>& values,
                                       const OscillationOptions& options) {
    if (times.size() != values.size()) throw InvalidArgument("oscillation metrics: length mismatch");
    const double t_start = times.empty() ? 0.0 : times.front() + options.burn_in_periods * options.period_hint;
    const double radius = options.isolation * options.period_hint;

    std::vector<std::size_t> peaks;
    for (std::size_t i = 1; i + 1 < values.size(); ++i) {
        if (times[i] < t_start) continue;
        if (!(values[i] > values[i - 1] && values[i] >= values[i + 1])) continue;
        bool dominant = true;
        for (std::size_t j = i; j-- > 0 && times[i] - times[j] <= radius;) {
            if (values[j] > values[i]) {
                dominant = false;
                break;
            }
        }
        for (std::size_t j = i + 1; dominant && j < values.size() && times[j] - times[i] <= radius; ++j) {
            if (values[j] > values[i]) dominant = false;
        }
        if (dominant) peaks.push_back(i);
    }
    if (peaks.size() < 3) {
        throw InvalidArgument("oscillation metrics: only " + std::to_string(peaks.size()) +
                              " peaks after burn-in (need 3)");
    }

    OscillationMetrics m;
    for (auto i : peaks) m.peak_times.push_back(times[i]);
    m.period = (m.peak_times.back() - m.peak_times.front()) / static_cast<double>(peaks.size() - 1);

    for (std::size_t p = 0; p + 1 < peaks.size(); ++p) {
        const auto first = values.begin() + static_cast<std::ptrdiff_t>(peaks[p]);
        const auto last = values.begin() + static_cast<std::ptrdiff_t>(peaks[p + 1]) + 1;
        const auto [lo, hi] = std::minmax_element(first, last);
        m.amplitudes.push_back(*hi - *lo);
    }
    m.mean_amplitude = std::accumulate(m.amplitudes.begin(), m.amplitudes.end(), 0.0) /
                       static_cast<double>(m.amplitudes.size());

    // least squares of log amplitude against the period index
    const std::size_t count = m.amplitudes.size();
    if (count >= 2) {
        double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
        for (std::size_t i = 0; i < count; ++i) {
            const double x = static_cast<double>(i);
            const double y = std::log(std::max(m.amplitudes[i], std::numeric_limits<double>::min()));
            sx += x;
            sy += y;
            sxx += x * x;
            sxy += x * y;
        }
        const double c = static_cast<double>(count);
        m.amplitude_slope = (c * sxy - sx * sy) / (c * sxx - sx * sx);
    }
    return m;
}

OscillationMetrics oscillation_metrics(const Trajectory& trajectory, const OscillationOptions& options) {
    std::vector<double> t, v;
    t.reserve(trajectory.series.size());
    v.reserve(trajectory.series.size());
    for (const auto& s : trajectory.series) {
        t.push_back(s.time);
        v.push_back(s.max_rescaled);
    }
    return oscillation_metrics(t, v, options);
}

EntropyReport entropy_report(const StateVector& u, const PerronSolution& perron, const DivisionRate& rate,
                             const ReportOptions& options, double mass_leak) {
    EntropyReport r;
    r.time = u.time();
    const auto v = rescaled_values(u, perron);
    r.E1 = weighted_norm(v, perron, 1.0);
    r.E2 = weighted_norm(v, perron, 2.0);
    r.Einf = weighted_norm(v, perron, kInfinity);
    r.D2 = entropy_dissipation_D2(v, perron, rate);
    r.gre_value = gre_functional(u, perron, options.H);
    r.tracked = options.tracked_modes;
    for (int k : options.tracked_modes) {
        r.moments.push_back(adjoint_moment(u, k, perron.mode) * rescale_factor(perron.lambda, k, u.time()));
    }
    if (options.coeffs != nullptr) r.attractor_distance = attractor_distance(u, *options.coeffs, perron);
    r.mass_leak = mass_leak;
    return r;
}

SampleHook entropy_hook(const PerronSolution& perron, const DivisionRate& rate, double rescale_rate) {
    const double r = std::isnan(rescale_rate) ? perron.lambda : rescale_rate;
    return [perron, rate, r](const StateVector& u, ScalarSample& s) {
        const auto v = u.rescaled(r);
        s.e2_norm = weighted_norm(v, perron, 2.0);
        s.d2 = entropy_dissipation_D2(v, perron, rate);
    };
}

}  // namespace gfrag
