#include "gfrag/scheme.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "gfrag/errors.hpp"

namespace gfrag {

double nominal_eigenvalue(KernelMode mode) { return mode == KernelMode::standard ? 1.0 : 0.0; }

double moment_growth_rate(const GeometricGrid& grid) { return std::log1p(grid.dx_rel()) / grid.dt(); }

Complex adjoint_first_moment(std::span<const Complex> u, const GeometricGrid& grid, KernelMode mode) {
    if (u.size() != grid.size()) throw InvalidArgument("adjoint moment: length mismatch");
    Complex sum{0.0, 0.0};
    for (std::size_t k = 1; k < u.size(); ++k) {
        const double phi = mode == KernelMode::standard ? grid.x(k) : 1.0;
        sum += u[k] * (phi * grid.width(k));
    }
    return sum;
}

namespace {

// Step outputs skip the finiteness validation so that run() can report overflow with its step index.
StateVector assemble(const GeometricGrid& grid, GridFunction values, double time) {
    StateVector out(grid);
    out.mutable_values() = std::move(values);
    out.set_time(time);
    return out;
}

}  // namespace

StateVector transport_step(const StateVector& state) {
    const auto& grid = state.grid();
    const double scale = 1.0 / (1.0 + grid.dx_rel());
    GridFunction out(state.size(), Complex{0.0, 0.0});
    const auto in = state.values();
    for (std::size_t k = 1; k < out.size(); ++k) out[k] = in[k - 1] * scale;
    return assemble(grid, std::move(out), state.time());
}

StateVector transport_difference_step(const StateVector& state, double dt) {
    const auto& grid = state.grid();
    const double courant = dt * (1.0 + grid.dx_rel()) / grid.dx_rel();
    if (!(dt > 0.0) || courant > 1.0 + 1e-12) {
        std::ostringstream os;
        os << "transport: CFL violated, dt x_k / w_k = " << courant << " > 1";
        throw InvalidArgument(os.str());
    }
    GridFunction out(state.size(), Complex{0.0, 0.0});
    const auto in = state.values();
    for (std::size_t k = 1; k < out.size(); ++k) {
        const double xk = grid.x(k);
        const double xm = grid.x(k - 1);
        out[k] = in[k] - (dt / grid.width(k)) * (xk * in[k] - xm * in[k - 1]);
    }
    return assemble(grid, std::move(out), state.time());
}

StateVector fragmentation_step(const StateVector& state, const DivisionRate& rate, double dt) {
    rate.require_certificate();
    const auto& grid = state.grid();
    if (!rate.grid().same_as(grid)) throw InvalidArgument("fragmentation: rate sampled on a different grid");
    if (!(dt > 0.0) || dt > grid.dt() * (1.0 + 1e-12))
        throw InvalidArgument("fragmentation: dt must lie in (0, grid dt]");

    const std::size_t n = static_cast<std::size_t>(grid.subdivisions());
    const std::size_t size = state.size();
    const double gain = rate.gain_factor() * dt;
    const auto in = state.values();
    const auto B = rate.samples();
    GridFunction out(size);
    for (std::size_t k = 0; k < size; ++k) {
        Complex v = in[k] * (1.0 - dt * B[k]);
        if (k + n < size) v += gain * B[k + n] * in[k + n];
        out[k] = v;
    }
    return assemble(grid, std::move(out), state.time() + dt);
}

StateVector fragmentation_step(const StateVector& state, const DivisionRate& rate) {
    return fragmentation_step(state, rate, state.grid().dt());
}

StateVector step(const StateVector& state, const DivisionRate& rate) {
    return fragmentation_step(transport_step(state), rate);
}

namespace {

std::size_t step_count(double horizon, double dt) {
    if (!(horizon >= 0.0) || !std::isfinite(horizon)) throw InvalidArgument("run: horizon must be finite and >= 0");
    if (horizon == 0.0) return 0;
    const double ratio = horizon / dt;
    return static_cast<std::size_t>(std::ceil(ratio - 1e-9 * ratio));
}

template <class Advance>
Trajectory integrate(const StateVector& initial, const DivisionRate& rate, double horizon, double dt,
                     double transport_growth, const RunOptions& options, Advance advance) {
    rate.require_certificate();
    if (!rate.grid().same_as(initial.grid())) throw InvalidArgument("run: rate sampled on a different grid");

    const KernelMode mode = rate.mode();
    const double lambda = nominal_eigenvalue(mode);
    Trajectory traj{.grid = initial.grid(),
                    .mode = mode,
                    .dt = dt,
                    .rescale_rate = lambda,
                    .steps = step_count(horizon, dt),
                    .final_state = initial};

    std::vector<double> pending = options.snapshot_times;
    std::sort(pending.begin(), pending.end());
    std::size_t next_pending = 0;

    StateVector u = initial;
    double moment = adjoint_first_moment(u.values(), u.grid(), mode).real();
    double leak = 0.0;

    auto record = [&](std::size_t l) {
        const double t = u.time();
        ScalarSample s;
        s.time = t;
        s.max_rescaled = u.max_rescaled(lambda);
        s.first_moment = moment * std::exp(-lambda * t);
        s.mass_leak = leak;
        if (options.hook) options.hook(u, s);
        traj.series.push_back(s);

        bool take = l == 0 || (options.snapshot_every > 0 && l % options.snapshot_every == 0);
        while (next_pending < pending.size() && pending[next_pending] <= t + 1e-12) {
            take = true;
            ++next_pending;
        }
        if (take) traj.snapshots.push_back(Snapshot{t, GridFunction(u.values().begin(), u.values().end())});
    };

    record(0);
    for (std::size_t l = 1; l <= traj.steps; ++l) {
        u = advance(u);
        u.set_time(static_cast<double>(l) * dt);
        if (!u.all_finite() || !std::isfinite(u.max_rescaled(lambda))) {
            std::ostringstream os;
            os << "numerical abort: non-finite state at step " << l << " (t = " << u.time() << ")";
            throw NumericalError(os.str(), l);
        }
        // the interior conserves the adjoint moment up to the transport growth factor
        const double next = adjoint_first_moment(u.values(), u.grid(), mode).real();
        leak += (transport_growth * moment - next) * std::exp(-lambda * u.time());
        moment = next;
        record(l);
    }
    traj.mass_leak = leak;
    traj.final_state = std::move(u);
    return traj;
}

}  // namespace

Trajectory run(const StateVector& initial, const DivisionRate& rate, double horizon, const RunOptions& options) {
    const double dt = initial.grid().dt();
    const double growth = rate.mode() == KernelMode::standard ? 1.0 + initial.grid().dx_rel() : 1.0;
    return integrate(initial, rate, horizon, dt, growth, options,
                     [&rate](const StateVector& s) { return step(s, rate); });
}

Trajectory diffusive_reference_run(const StateVector& initial, const DivisionRate& rate, double cfl_fraction,
                                   double horizon, const RunOptions& options) {
    if (!(cfl_fraction > 0.0 && cfl_fraction < 1.0))
        throw InvalidArgument("diffusive run: cfl_fraction must lie in (0, 1); use run() for the exact scheme");
    const double dt = cfl_fraction * initial.grid().dt();
    const double growth =
        rate.mode() == KernelMode::standard ? 1.0 + cfl_fraction * initial.grid().dx_rel() : 1.0;
    auto traj = integrate(initial, rate, horizon, dt, growth, options, [&rate, dt](const StateVector& s) {
        return fragmentation_step(transport_difference_step(s, dt), rate, dt);
    });
    traj.variant = "diffusive";
    traj.cfl_fraction = cfl_fraction;
    return traj;
}

}  // namespace gfrag
