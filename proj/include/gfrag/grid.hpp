#pragma once

#include <complex>
#include <cstddef>
#include <memory>
#include <span>
#include <vector>

namespace gfrag {

using Complex = std::complex<double>;
using GridFunction = std::vector<Complex>;

/**
 * Geometric mesh x_k = 2^{(k-N)/n}, k = 0..2N, on which doubling and halving
 * map grid points onto grid points: x_{k+n} = 2 x_k holds bitwise.
 *
 * The relative spacing is dx = 2^{1/n} - 1 and the time step dt = dx/(1+dx)
 * makes the upwind transport step move every point exactly one cell.
 * Quadrature widths are w_k = x_k - x_{k-1} for k >= 1 and w_0 = 0.
 *
 * Copies share the same immutable storage.
 */
class GeometricGrid {
public:
    /// Throws InvalidArgument unless n >= 1 and N >= 1.
    GeometricGrid(int n, int N);

    int subdivisions() const { return data_->n; }
    int half_extent() const { return data_->N; }
    std::size_t size() const { return data_->points.size(); }
    std::size_t top_index() const { return size() - 1; }

    double x(std::size_t k) const { return data_->points[k]; }
    double width(std::size_t k) const { return data_->widths[k]; }
    std::span<const double> points() const { return data_->points; }
    std::span<const double> widths() const { return data_->widths; }

    double dx_rel() const { return data_->dx; }
    double dt() const { return data_->dt; }
    double x_min() const { return data_->points.front(); }
    double x_max() const { return data_->points.back(); }

    /// Exact exponent (k - N)/n, i.e. log2(x_k).
    double log2_position(std::size_t k) const;
    /// Index of the grid point closest to x in log scale (clamped to the grid).
    std::size_t nearest_index(double x) const;

    bool same_as(const GeometricGrid& other) const {
        return data_ == other.data_ || (data_->n == other.data_->n && data_->N == other.data_->N);
    }

private:
    struct Data {
        int n;
        int N;
        double dx;
        double dt;
        std::vector<double> points;
        std::vector<double> widths;
    };
    std::shared_ptr<const Data> data_;
};

GeometricGrid build_grid(int n, int N);

/// Right-rectangle rule on the geometric mesh: sum_{k>=1} values_k w_k.
Complex quadrature(std::span<const Complex> values, const GeometricGrid& grid);
double quadrature(std::span<const double> values, const GeometricGrid& grid);

}  // namespace gfrag
