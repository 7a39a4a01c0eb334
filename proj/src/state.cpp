#include "gfrag/state.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "gfrag/errors.hpp"

namespace gfrag {

StateVector::StateVector(GeometricGrid grid)
    : grid_(std::move(grid)), values_(grid_.size(), Complex{0.0, 0.0}) {}

StateVector::StateVector(GeometricGrid grid, GridFunction values, double time)
    : grid_(std::move(grid)), values_(std::move(values)), time_(time) {
    if (values_.size() != grid_.size())
        throw InvalidArgument("state: expected " + std::to_string(grid_.size()) + " values, got " +
                              std::to_string(values_.size()));
    if (!(time_ >= 0.0) || !std::isfinite(time_)) throw InvalidArgument("state: time must be finite and >= 0");
    if (!all_finite()) throw InvalidArgument("state: non-finite entry");
}

GridFunction StateVector::rescaled(double lambda) const {
    GridFunction out(values_);
    const double s = std::exp(-lambda * time_);
    for (auto& v : out) v *= s;
    return out;
}

double StateVector::max_rescaled(double lambda) const {
    double m = 0.0;
    for (const auto& v : values_) m = std::max(m, std::abs(v));
    return m * std::exp(-lambda * time_);
}

bool StateVector::all_finite() const {
    return std::all_of(values_.begin(), values_.end(),
                       [](const Complex& v) { return std::isfinite(v.real()) && std::isfinite(v.imag()); });
}

bool StateVector::is_real(double tol) const {
    return std::all_of(values_.begin(), values_.end(), [tol](const Complex& v) { return std::abs(v.imag()) <= tol; });
}

StateVector& StateVector::operator+=(const StateVector& other) {
    if (!grid_.same_as(other.grid_)) throw InvalidArgument("state: grids differ");
    for (std::size_t k = 0; k < values_.size(); ++k) values_[k] += other.values_[k];
    return *this;
}

StateVector& StateVector::operator*=(Complex alpha) {
    for (auto& v : values_) v *= alpha;
    return *this;
}

StateVector operator+(StateVector a, const StateVector& b) { return a += b; }
StateVector operator*(Complex alpha, StateVector a) { return a *= alpha; }

}  // namespace gfrag
