#pragma once

#include <functional>
#include <string>

#include "gfrag/grid.hpp"
#include "gfrag/state.hpp"

namespace gfrag {

enum class ProfileKind { smooth_gaussian_like, peak, custom };

/**
 * Initial size distribution u_0, evaluable at any positive size.
 *
 * The peak is the indicator of [c 2^{-w/2}, c 2^{w/2}] (w in octaves) scaled to
 * unit first moment. On a grid it becomes the set of cells whose points fall in
 * that interval (at least one cell), rescaled so that the grid quadrature of
 * x u_0 is exactly one.
 */
struct Profile {
    ProfileKind kind = ProfileKind::custom;
    std::string name;
    std::function<Complex(double)> evaluator;
    double center = 2.0;
    double width_octaves = 0.125;

    Complex operator()(double x) const { return evaluator(x); }

    /// x^2 exp(-x^2/2).
    static Profile smooth();
    static Profile peak(double center = 2.0, double width_octaves = 0.125);
    static Profile custom(std::string name, std::function<Complex(double)> f);
    static Profile zero();
};

/// Samples the profile at the grid points; time 0.
/// Throws InvalidArgument on a non-finite value or a peak outside the grid.
StateVector sample_initial(const Profile& profile, const GeometricGrid& grid);

}  // namespace gfrag
