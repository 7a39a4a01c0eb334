#include "gfrag/profile.hpp"

#include <cmath>
#include <string>

#include "gfrag/errors.hpp"

namespace gfrag {

Profile Profile::smooth() {
    Profile p;
    p.kind = ProfileKind::smooth_gaussian_like;
    p.name = "smooth";
    p.evaluator = [](double x) { return Complex{x * x * std::exp(-0.5 * x * x), 0.0}; };
    return p;
}

Profile Profile::peak(double center, double width_octaves) {
    if (!(center > 0.0) || !(width_octaves >= 0.0))
        throw InvalidArgument("peak profile: center must be > 0 and width >= 0");
    Profile p;
    p.kind = ProfileKind::peak;
    p.name = "peak";
    p.center = center;
    p.width_octaves = width_octaves;
    const double a = center * std::exp2(-0.5 * width_octaves);
    const double b = center * std::exp2(0.5 * width_octaves);
    // int_a^b x dx = (b^2 - a^2)/2; a zero width has no continuum density
    const double height = b > a ? 2.0 / (b * b - a * a) : 0.0;
    p.evaluator = [a, b, height](double x) { return Complex{(x >= a && x <= b) ? height : 0.0, 0.0}; };
    return p;
}

Profile Profile::custom(std::string name, std::function<Complex(double)> f) {
    Profile p;
    p.kind = ProfileKind::custom;
    p.name = std::move(name);
    p.evaluator = std::move(f);
    return p;
}

Profile Profile::zero() {
    return custom("zero", [](double) { return Complex{0.0, 0.0}; });
}

namespace {

StateVector sample_peak(const Profile& profile, const GeometricGrid& grid) {
    const double lo = std::log2(profile.center) - 0.5 * profile.width_octaves;
    const double hi = std::log2(profile.center) + 0.5 * profile.width_octaves;
    GridFunction u(grid.size(), Complex{0.0, 0.0});
    std::size_t count = 0;
    // compare exponents exactly: log2(x_k) = (k - N)/n
    for (std::size_t k = 1; k < grid.size(); ++k) {
        const double e = grid.log2_position(k);
        if (e >= lo - 1e-12 && e <= hi + 1e-12) {
            u[k] = 1.0;
            ++count;
        }
    }
    if (count == 0) {
        const std::size_t k = grid.nearest_index(profile.center);
        if (k == 0 || grid.log2_position(k) < lo - 1.0 || grid.log2_position(k) > hi + 1.0)
            throw InvalidArgument("peak profile: center " + std::to_string(profile.center) + " is outside the grid");
        u[k] = 1.0;
    }
    double moment = 0.0;
    for (std::size_t k = 1; k < grid.size(); ++k) moment += u[k].real() * grid.x(k) * grid.width(k);
    for (auto& v : u) v /= moment;
    return StateVector(grid, std::move(u), 0.0);
}

}  // namespace

StateVector sample_initial(const Profile& profile, const GeometricGrid& grid) {
    if (profile.kind == ProfileKind::peak) return sample_peak(profile, grid);
    if (!profile.evaluator) throw InvalidArgument("profile '" + profile.name + "' has no evaluator");
    GridFunction u(grid.size());
    for (std::size_t k = 0; k < grid.size(); ++k) {
        u[k] = profile(grid.x(k));
        if (!std::isfinite(u[k].real()) || !std::isfinite(u[k].imag()))
            throw InvalidArgument("profile '" + profile.name + "' is not finite at x = " + std::to_string(grid.x(k)));
    }
    return StateVector(grid, std::move(u), 0.0);
}

}  // namespace gfrag
