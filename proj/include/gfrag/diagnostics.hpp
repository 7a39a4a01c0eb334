#pragma once

#include <complex>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "gfrag/rate.hpp"
#include "gfrag/scheme.hpp"
#include "gfrag/spectral.hpp"
#include "gfrag/state.hpp"

namespace gfrag {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// E_p norm (sum_k w_k |u_k|^p phi_k U_k^{1-p})^{1/p}; p = infinity gives max |u_k|/U_k.
/// Cells below the perron floor are skipped. Requires p >= 1.
double weighted_norm(std::span<const Complex> u, const PerronSolution& perron, double p);
double weighted_norm(const StateVector& u, const PerronSolution& perron, double p);

/// sum_{k>=n} w_k phi_k B_k U_k |u_k/U_k - u_{k-n}/U_{k-n}|^2. Invariant under u -> e^{-lambda t} u
/// only up to the factor e^{-2 lambda t}: pass the rescaled state to compare times.
double entropy_dissipation_D2(std::span<const Complex> u, const PerronSolution& perron, const DivisionRate& rate);
double entropy_dissipation_D2(const StateVector& u, const PerronSolution& perron, const DivisionRate& rate);

/// Convex entropy density H on complex ratios.
struct EntropyFunction {
    std::string name;
    std::function<double(Complex)> H;
};
EntropyFunction quadratic_entropy();
EntropyFunction modulus_entropy();
/// (|z| - C)^+
EntropyFunction hinge_entropy(double C);

/// sum_k w_k phi_k U_k H(u_k / (U_k e^{r t})), with t taken from the state and r the
/// rescaling rate (NaN: the nominal eigenvalue; perron.discrete_rate: the scheme's own growth).
double gre_functional(const StateVector& u, const PerronSolution& perron, const EntropyFunction& H,
                      double rescale_rate = std::numeric_limits<double>::quiet_NaN());

struct DriftPoint {
    double time;
    double drift;
};

/// |<u(t), phi_k> e^{-lambda_k t} - <u_0, phi_k>| with lambda_k = lambda + 2 i pi k/log 2.
/// k = 0 reads the per-step series; other k need snapshots.
std::vector<DriftPoint> balance_drift(const Trajectory& trajectory, int k);

/// ||u_t e^{-lambda t} - R_t P u_0||_{E2}, t taken from the state.
double attractor_distance(const StateVector& u_t, const ModeCoefficients& coeffs, const PerronSolution& perron);

/// (1/T) int_0^T u(s) e^{-lambda s} ds over the snapshots (left rectangles, T = last snapshot time).
/// Throws InvalidArgument with fewer than two snapshots.
GridFunction cesaro_average(const Trajectory& trajectory);

struct OscillationOptions {
    double period_hint = 0.69314718055994531;
    double burn_in_periods = 2.0;
    /// A peak must be the maximum within +- isolation * period_hint.
    double isolation = 0.25;
};

struct OscillationMetrics {
    double period = 0.0;
    /// d log(peak-to-trough amplitude) / d(period index)
    double amplitude_slope = 0.0;
    std::vector<double> peak_times;
    std::vector<double> amplitudes;
    double mean_amplitude = 0.0;
};

/// Three-point local maxima after the burn-in, filtered by isolation; period from the mean
/// spacing and amplitude trend from a linear fit of log(max - min) between consecutive
/// peaks. Throws InvalidArgument with fewer than 3 peaks.
OscillationMetrics oscillation_metrics(const std::vector<double>& times, const std::vector<double>& values,
                                       const OscillationOptions& options = {});
OscillationMetrics oscillation_metrics(const Trajectory& trajectory, const OscillationOptions& options = {});

struct EntropyReport {
    double time = 0.0;
    double E1 = 0.0;
    double E2 = 0.0;
    double Einf = 0.0;
    double D2 = 0.0;
    double gre_value = 0.0;
    std::vector<int> tracked;
    std::vector<Complex> moments;
    double attractor_distance = std::numeric_limits<double>::quiet_NaN();
    double mass_leak = 0.0;
};

struct ReportOptions {
    EntropyFunction H = quadratic_entropy();
    std::vector<int> tracked_modes{0, 1};
    const ModeCoefficients* coeffs = nullptr;
};

EntropyReport entropy_report(const StateVector& u, const PerronSolution& perron, const DivisionRate& rate,
                             const ReportOptions& options = {}, double mass_leak = 0.0);

/// Run hook filling e2_norm and d2 of each sample from the state rescaled by e^{-r t}
/// (NaN: the nominal eigenvalue).
SampleHook entropy_hook(const PerronSolution& perron, const DivisionRate& rate,
                        double rescale_rate = std::numeric_limits<double>::quiet_NaN());

}  // namespace gfrag
