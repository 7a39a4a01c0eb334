#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace gfrag {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A precondition on an argument or a configuration value does not hold.
class InvalidArgument : public Error {
public:
    using Error::Error;
};

/// The explicit fragmentation step would not be positivity preserving:
/// dt * max_k B(x_k) > 1.
class StabilityError : public Error {
public:
    StabilityError(const std::string& what, double stability_number, int max_admissible_N,
                   int min_admissible_n)
        : Error(what),
          stability_number_(stability_number),
          max_admissible_N_(max_admissible_N),
          min_admissible_n_(min_admissible_n) {}

    double stability_number() const { return stability_number_; }
    /// Largest half-extent N that is stable at the current n (0 if none).
    int max_admissible_N() const { return max_admissible_N_; }
    /// Smallest n that is stable at the current domain extent N/n.
    int min_admissible_n() const { return min_admissible_n_; }

private:
    double stability_number_;
    int max_admissible_N_;
    int min_admissible_n_;
};

/// Overflow or NaN detected while time stepping.
class NumericalError : public Error {
public:
    NumericalError(const std::string& what, std::size_t step) : Error(what), step_(step) {}
    std::size_t step() const { return step_; }

private:
    std::size_t step_;
};

/// An iterative procedure did not reach its tolerance.
class ConvergenceError : public Error {
public:
    ConvergenceError(const std::string& what, double achieved) : Error(what), achieved_(achieved) {}
    double achieved() const { return achieved_; }

private:
    double achieved_;
};

}  // namespace gfrag
