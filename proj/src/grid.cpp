#include "gfrag/grid.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "gfrag/errors.hpp"

namespace gfrag {

namespace {

// floor division for a positive divisor
int floor_div(int a, int b) {
    int q = a / b;
    if ((a % b != 0) && (a < 0)) --q;
    return q;
}

}  // namespace

GeometricGrid::GeometricGrid(int n, int N) {
    if (n < 1) throw InvalidArgument("grid: subdivisions per doubling n must be >= 1, got " + std::to_string(n));
    if (N < 1) throw InvalidArgument("grid: half-extent N must be >= 1, got " + std::to_string(N));

    auto d = std::make_shared<Data>();
    d->n = n;
    d->N = N;
    d->dx = std::expm1(std::numbers::ln2 / n);
    d->dt = d->dx / (1.0 + d->dx);

    // 2^{(k-N)/n} = 2^q * 2^{r/n} with k - N = q n + r, 0 <= r < n. Scaling by an
    // exact power of two keeps x_{k+n} = 2 x_k bitwise.
    std::vector<double> base(static_cast<std::size_t>(n));
    for (int r = 0; r < n; ++r) base[static_cast<std::size_t>(r)] = std::exp2(static_cast<double>(r) / n);

    const std::size_t size = 2 * static_cast<std::size_t>(N) + 1;
    d->points.resize(size);
    d->widths.assign(size, 0.0);
    for (std::size_t k = 0; k < size; ++k) {
        const int e = static_cast<int>(k) - N;
        const int q = floor_div(e, n);
        const int r = e - q * n;
        d->points[k] = std::ldexp(base[static_cast<std::size_t>(r)], q);
    }
    for (std::size_t k = 1; k < size; ++k) d->widths[k] = d->points[k] - d->points[k - 1];
    data_ = std::move(d);
}

double GeometricGrid::log2_position(std::size_t k) const {
    return (static_cast<double>(k) - data_->N) / data_->n;
}

std::size_t GeometricGrid::nearest_index(double x) const {
    if (!(x > 0.0)) return 0;
    const double pos = std::log2(x) * data_->n + data_->N;
    if (pos <= 0.0) return 0;
    const auto k = static_cast<std::size_t>(std::llround(pos));
    return k > top_index() ? top_index() : k;
}

GeometricGrid build_grid(int n, int N) { return GeometricGrid(n, N); }

Complex quadrature(std::span<const Complex> values, const GeometricGrid& grid) {
    if (values.size() != grid.size())
        throw InvalidArgument("quadrature: expected " + std::to_string(grid.size()) + " values, got " +
                              std::to_string(values.size()));
    Complex sum{0.0, 0.0};
    const auto w = grid.widths();
    for (std::size_t k = 1; k < values.size(); ++k) sum += values[k] * w[k];
    return sum;
}

double quadrature(std::span<const double> values, const GeometricGrid& grid) {
    if (values.size() != grid.size())
        throw InvalidArgument("quadrature: expected " + std::to_string(grid.size()) + " values, got " +
                              std::to_string(values.size()));
    double sum = 0.0;
    const auto w = grid.widths();
    for (std::size_t k = 1; k < values.size(); ++k) sum += values[k] * w[k];
    return sum;
}

}  // namespace gfrag
