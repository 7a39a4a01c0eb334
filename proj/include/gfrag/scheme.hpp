#pragma once

#include <cstddef>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "gfrag/grid.hpp"
#include "gfrag/rate.hpp"
#include "gfrag/state.hpp"

namespace gfrag {

/// Exponent lambda of the dominant growth e^{lambda t}: 1 (standard) or 0 (conservative).
double nominal_eigenvalue(KernelMode mode);
/// ln(1+dx)/dt: per-unit-time growth of <u, x> under the exact step away from the
/// boundaries (the quadrature weights x_k w_k are a left eigenvector with eigenvalue 1+dx).
double moment_growth_rate(const GeometricGrid& grid);
/// <u, phi> with phi(x) = x (standard) or 1 (conservative), right-rectangle quadrature.
Complex adjoint_first_moment(std::span<const Complex> u, const GeometricGrid& grid, KernelMode mode);

// --- single steps --------------------------------------------------------

/// Upwind transport at exact CFL, u_k <- u_{k-1}/(1+dx), u_0 <- 0. Time unchanged.
StateVector transport_step(const StateVector& state);

/// Upwind transport in difference form, u_k - (dt/w_k)(x_k u_k - x_{k-1} u_{k-1}),
/// with u_0 <- 0. Throws InvalidArgument if dt (1+dx)/dx > 1. Time unchanged.
StateVector transport_difference_step(const StateVector& state, double dt);

/// Explicit fragmentation u_k (1 - dt B_k) + c dt B_{k+n} u_{k+n}, gain zero above the
/// top index; advances time by dt. Requires the rate's stability certificate and
/// dt <= grid dt.
StateVector fragmentation_step(const StateVector& state, const DivisionRate& rate, double dt);
StateVector fragmentation_step(const StateVector& state, const DivisionRate& rate);

/// fragmentation_step o transport_step.
StateVector step(const StateVector& state, const DivisionRate& rate);

// --- trajectories --------------------------------------------------------

struct ScalarSample {
    double time = 0.0;
    double max_rescaled = 0.0;
    /// <u, phi> e^{-lambda t}
    double first_moment = 0.0;
    double e2_norm = std::numeric_limits<double>::quiet_NaN();
    double d2 = std::numeric_limits<double>::quiet_NaN();
    /// cumulative rescaled adjoint-moment loss through the boundaries
    double mass_leak = 0.0;
};

struct Snapshot {
    double time = 0.0;
    GridFunction values;  // u, not rescaled
};

struct Trajectory {
    GeometricGrid grid;
    KernelMode mode = KernelMode::standard;
    std::string variant = "exact";
    double dt = 0.0;
    double cfl_fraction = 1.0;
    /// lambda used for every rescaling e^{-lambda t} in this trajectory
    double rescale_rate = 1.0;
    std::size_t steps = 0;
    std::vector<Snapshot> snapshots{};
    std::vector<ScalarSample> series{};
    StateVector final_state;
    double mass_leak = 0.0;
};

/// Fills optional fields of a sample (E2 norm, D2, ...) from the current state.
using SampleHook = std::function<void(const StateVector&, ScalarSample&)>;

struct RunOptions {
    /// Snapshot every this many steps (0: initial snapshot only, plus snapshot_times).
    std::size_t snapshot_every = 0;
    /// Additional snapshots at the first step with time >= each entry.
    std::vector<double> snapshot_times;
    SampleHook hook;
};

/// Runs ceil(horizon/dt) exact steps. Throws NumericalError with the step index on
/// overflow or NaN.
Trajectory run(const StateVector& initial, const DivisionRate& rate, double horizon, const RunOptions& options = {});

/// Same as run, with transport in difference form at dt' = cfl_fraction * dt.
/// Requires 0 < cfl_fraction < 1.
Trajectory diffusive_reference_run(const StateVector& initial, const DivisionRate& rate, double cfl_fraction,
                                   double horizon, const RunOptions& options = {});

}  // namespace gfrag
