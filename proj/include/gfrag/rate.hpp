#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "gfrag/grid.hpp"

namespace gfrag {

/// standard: gain 4 B(2x) u(2x), eigenvalue 1, adjoint phi(x) = x.
/// conservative: gain 2 B(2x) u(2x), eigenvalue 0, adjoint phi(x) = 1.
enum class KernelMode { standard, conservative };

/// Power-law bounds K0 x^g0 <= B(x) <= K1 x^g1 for x >= x0.
struct GrowthBounds {
    double gamma0;
    double gamma1;
    double k0;
    double k1;
    double x0;
};

/**
 * Division rate sampled on a grid, with its stability certificate
 * dt * max_k B(x_k) <= 1.
 *
 * Construction validates positivity and the optional growth bounds; the
 * certificate is evaluated but only enforced by require_certificate() so that a
 * caller can still report admissible grid sizes for an unstable configuration.
 */
class DivisionRate {
public:
    DivisionRate(std::function<double(double)> rate, GeometricGrid grid, KernelMode mode = KernelMode::standard,
                 std::optional<GrowthBounds> bounds = std::nullopt, std::string description = "custom");

    /// B(x) = K x^gamma; carries its own growth bounds.
    static DivisionRate power_law(double K, double gamma, GeometricGrid grid, KernelMode mode = KernelMode::standard);
    /// B = 0: degenerate control for the pure-transport limit. Outside the hypotheses
    /// of the spectral module (no positive eigenvector exists).
    static DivisionRate zero(GeometricGrid grid, KernelMode mode = KernelMode::standard);
    /// Log-log linear interpolation through (x_i, B_i), power-law extrapolation at both ends.
    static DivisionRate from_table(std::vector<double> xs, std::vector<double> rates, GeometricGrid grid,
                                   KernelMode mode = KernelMode::standard);

    double operator()(double x) const { return rate_(x); }
    const std::function<double(double)>& evaluator() const { return rate_; }
    std::span<const double> samples() const { return samples_; }
    double sample(std::size_t k) const { return samples_[k]; }
    const GeometricGrid& grid() const { return grid_; }
    KernelMode mode() const { return mode_; }
    /// 4 in standard mode, 2 in conservative mode.
    double gain_factor() const { return mode_ == KernelMode::standard ? 4.0 : 2.0; }
    const std::optional<GrowthBounds>& bounds() const { return bounds_; }
    const std::string& description() const { return description_; }

    double max_rate() const { return max_rate_; }
    /// dt * max_k B(x_k).
    double stability_number() const { return max_rate_ * grid_.dt(); }
    bool certified() const { return stability_number() <= 1.0; }
    /// Throws StabilityError with admissible-size hints.
    void require_certificate() const;

    /// Largest N <= limit that is stable at this n (0 if none).
    int max_admissible_half_extent(int limit) const;
    /// Smallest n that is stable at the current extent N/n octaves.
    int min_admissible_subdivisions() const;

    /// Same rate resampled on another grid.
    DivisionRate on(const GeometricGrid& grid) const;

private:
    std::function<double(double)> rate_;
    GeometricGrid grid_;
    KernelMode mode_;
    std::optional<GrowthBounds> bounds_;
    std::string description_;
    std::vector<double> samples_;
    double max_rate_ = 0.0;
};

const char* to_string(KernelMode mode);
KernelMode kernel_mode_from_string(const std::string& s);

}  // namespace gfrag
