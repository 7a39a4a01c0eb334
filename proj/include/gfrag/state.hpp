#pragma once

#include <cstddef>
#include <span>

#include "gfrag/grid.hpp"

namespace gfrag {

/// Complex grid function u(t, x_k) together with its time stamp and grid.
class StateVector {
public:
    /// Zero state at time 0.
    explicit StateVector(GeometricGrid grid);
    /// Throws InvalidArgument on length mismatch, non-finite entries or negative time.
    StateVector(GeometricGrid grid, GridFunction values, double time = 0.0);

    const GeometricGrid& grid() const { return grid_; }
    std::span<const Complex> values() const { return values_; }
    GridFunction& mutable_values() { return values_; }
    std::size_t size() const { return values_.size(); }
    double time() const { return time_; }
    void set_time(double t) { time_ = t; }

    const Complex& operator[](std::size_t k) const { return values_[k]; }
    Complex& operator[](std::size_t k) { return values_[k]; }

    /// u(t, x_k) e^{-lambda t}.
    GridFunction rescaled(double lambda = 1.0) const;
    /// max_k |u_k| e^{-lambda t}.
    double max_rescaled(double lambda = 1.0) const;
    bool all_finite() const;
    bool is_real(double tol = 0.0) const;

    StateVector& operator+=(const StateVector& other);
    StateVector& operator*=(Complex alpha);

private:
    GeometricGrid grid_;
    GridFunction values_;
    double time_ = 0.0;
};

StateVector operator+(StateVector a, const StateVector& b);
StateVector operator*(Complex alpha, StateVector a);

}  // namespace gfrag
