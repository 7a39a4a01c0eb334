#include "doctest.h"

#include <cmath>
#include <numbers>
#include <random>

#include "gfrag/diagnostics.hpp"
#include "gfrag/errors.hpp"
#include "gfrag/profile.hpp"
#include "gfrag/scheme.hpp"

using namespace gfrag;

namespace {

StateVector spike(const GeometricGrid& g, std::size_t j, Complex v = 1.0) {
    StateVector s(g);
    s[j] = v;
    return s;
}

StateVector random_state(const GeometricGrid& g, std::mt19937_64& rng, bool complex_values = true) {
    std::uniform_real_distribution<double> d(-1.0, 1.0);
    StateVector s(g);
    for (std::size_t k = 0; k < g.size(); ++k) s[k] = Complex{d(rng), complex_values ? d(rng) : 0.0};
    return s;
}

// Largest stable domain for B = x^2 at subdivision n.
GeometricGrid stable_grid(int n) {
    const auto probe = DivisionRate::power_law(1.0, 2.0, build_grid(n, 1));
    return build_grid(n, probe.max_admissible_half_extent(8 * n));
}

}  // namespace

TEST_CASE("transport_step: zero, spike and two spikes") {
    const auto g = build_grid(8, 24);
    const double s = 1.0 / (1.0 + g.dx_rel());
    const auto z = transport_step(StateVector(g));
    for (std::size_t k = 0; k < g.size(); ++k) CHECK(z[k] == Complex{});

    const auto one = transport_step(spike(g, 10));
    for (std::size_t k = 0; k < g.size(); ++k) CHECK(one[k] == (k == 11 ? Complex{s} : Complex{}));

    auto two = spike(g, 10);
    two[11] = 2.0;
    const auto out = transport_step(two);
    CHECK(out[11] == Complex{s});
    CHECK(out[12] == Complex{2.0 * s});
    CHECK(out[10] == Complex{});
    CHECK(out[0] == Complex{});
    CHECK(out.time() == 0.0);
}

TEST_CASE("transport_step: shift form agrees with the difference form at exact CFL") {
    std::mt19937_64 rng(7);
    const auto g = build_grid(32, 256);
    for (int trial = 0; trial < 10; ++trial) {
        const auto u = random_state(g, rng);
        const auto a = transport_step(u);
        const auto b = transport_difference_step(u, g.dt());
        double scale = 0.0, err = 0.0;
        for (std::size_t k = 0; k < g.size(); ++k) {
            scale = std::max(scale, std::abs(u[k]));
            err = std::max(err, std::abs(a[k] - b[k]));
        }
        CHECK(err <= 1e-12 * scale);
    }
    CHECK_THROWS_AS(transport_difference_step(StateVector(g), 1.01 * g.dt()), InvalidArgument);
}

TEST_CASE("fragmentation_step: B = 0 is the identity, certified spike empties its cell") {
    const auto g = build_grid(4, 8);
    std::mt19937_64 rng(3);
    const auto u = random_state(g, rng);
    const auto same = fragmentation_step(u, DivisionRate::zero(g));
    for (std::size_t k = 0; k < g.size(); ++k) CHECK(same[k] == u[k]);
    CHECK(same.time() == doctest::Approx(g.dt()));

    // constant rate with dt B = 1
    const double b = 1.0 / g.dt();
    const DivisionRate rate([b](double) { return b; }, g);
    CHECK(rate.stability_number() == doctest::Approx(1.0));
    const std::size_t j = 10;
    const auto out = fragmentation_step(spike(g, j), rate);
    CHECK(std::abs(out[j]) < 1e-15);
    CHECK(out[j - 4].real() == doctest::Approx(4.0 * g.dt() * b));
    for (std::size_t k = 0; k < g.size(); ++k) {
        if (k != j && k != j - 4) CHECK(out[k] == Complex{});
    }
}

TEST_CASE("fragmentation_step: gain factor 2 in conservative mode, truncated above the top") {
    const auto g = build_grid(4, 8);
    const auto std_rate = DivisionRate::power_law(0.5, 1.0, g);
    const auto cons_rate = DivisionRate::power_law(0.5, 1.0, g, KernelMode::conservative);
    const auto a = fragmentation_step(spike(g, 12), std_rate);
    const auto c = fragmentation_step(spike(g, 12), cons_rate);
    CHECK(c[8].real() == doctest::Approx(0.5 * a[8].real()));
    CHECK(c[12] == a[12]);
    // the top index has no gain contribution to anything above it
    const auto top = fragmentation_step(spike(g, 3), std_rate);
    CHECK(top[3].real() == doctest::Approx(1.0 - g.dt() * std_rate.sample(3)));
}

TEST_CASE("fragmentation_step: conservative mode keeps the zeroth moment on interior indices") {
    // With gain factor 2, a mother of size x_{k+n} leaves one daughter of size x_k: the
    // number of particles is conserved, so quadrature(u) is the invariant.
    const auto g = build_grid(16, 48);
    const auto rate = DivisionRate::power_law(0.5, 1.0, g, KernelMode::conservative);
    StateVector u(g);
    for (std::size_t k = 20; k < 70; ++k) u[k] = 1.0 + 0.1 * std::sin(0.3 * k);
    const auto v = fragmentation_step(u, rate);
    const double before = quadrature(u.values(), g).real();
    const double after = quadrature(v.values(), g).real();
    CHECK(std::abs(after - before) <= 1e-12 * before);
}

TEST_CASE("fragmentation_step: standard mode keeps the first moment on interior indices") {
    const auto g = build_grid(16, 48);
    const auto rate = DivisionRate::power_law(0.5, 1.0, g);
    StateVector u(g);
    for (std::size_t k = 20; k < 70; ++k) u[k] = 1.0 + 0.1 * std::sin(0.3 * k);
    const auto v = fragmentation_step(u, rate);
    const double before = adjoint_first_moment(u.values(), g, KernelMode::standard).real();
    const double after = adjoint_first_moment(v.values(), g, KernelMode::standard).real();
    CHECK(std::abs(after - before) <= 1e-12 * before);
}

TEST_CASE("fragmentation_step: rejects an uncertified rate") {
    const auto g = build_grid(32, 256);
    const auto rate = DivisionRate::power_law(1.0, 2.0, g);
    CHECK_FALSE(rate.certified());
    CHECK_THROWS_AS(fragmentation_step(StateVector(g), rate), StabilityError);
    try {
        rate.require_certificate();
    } catch (const StabilityError& e) {
        CHECK(e.max_admissible_N() == 88);
        CHECK(e.min_admissible_n() > 32);
    }
}

TEST_CASE("step: B = 0 is a pure shift; zero stays zero") {
    const auto g = build_grid(8, 24);
    std::mt19937_64 rng(11);
    const auto u = random_state(g, rng);
    const auto a = step(u, DivisionRate::zero(g));
    const auto b = transport_step(u);
    for (std::size_t k = 0; k < g.size(); ++k) CHECK(a[k] == b[k]);
    const auto h = stable_grid(8);
    const auto z = step(StateVector(h), DivisionRate::power_law(1.0, 2.0, h));
    for (std::size_t k = 0; k < h.size(); ++k) CHECK(z[k] == Complex{});
}

TEST_CASE("step: peak loses mass exactly n indices below its shifted position") {
    const auto g = stable_grid(32);
    const auto rate = DivisionRate::power_law(1.0, 2.0, g);
    const auto u0 = sample_initial(Profile::peak(2.0, 0.0), g);
    std::size_t j = 0;
    for (std::size_t k = 0; k < g.size(); ++k) {
        if (u0[k] != Complex{}) j = k;
    }
    const auto u1 = step(u0, rate);
    for (std::size_t k = 0; k < g.size(); ++k) {
        CAPTURE(k);
        if (k == j + 1 || k == j + 1 - 32)
            CHECK(u1[k].real() > 0.0);
        else
            CHECK(u1[k] == Complex{});
    }
    CHECK(u1.time() == doctest::Approx(g.dt()));
}

TEST_CASE("step: linear over complex coefficients and positivity preserving") {
    const auto g = stable_grid(16);
    const auto rate = DivisionRate::power_law(1.0, 2.0, g);
    std::mt19937_64 rng(5);
    const auto u = random_state(g, rng);
    const auto v = random_state(g, rng);
    const Complex alpha{0.3, -1.2}, beta{-2.0, 0.5};
    const auto lhs = step(alpha * u + beta * v, rate);
    const auto rhs = alpha * step(u, rate) + beta * step(v, rate);
    for (std::size_t k = 0; k < g.size(); ++k) CHECK(std::abs(lhs[k] - rhs[k]) < 1e-13);

    StateVector pos(g);
    std::uniform_real_distribution<double> d(0.0, 1.0);
    for (std::size_t k = 0; k < g.size(); ++k) pos[k] = d(rng);
    auto w = pos;
    for (int l = 0; l < 50; ++l) w = step(w, rate);
    for (std::size_t k = 0; k < g.size(); ++k) {
        CHECK(w[k].real() >= 0.0);
        CHECK(w[k].imag() == 0.0);
    }
}

TEST_CASE("run: horizon 0 keeps only the initial snapshot") {
    const auto g = stable_grid(32);
    const auto rate = DivisionRate::power_law(1.0, 2.0, g);
    const auto u0 = sample_initial(Profile::peak(), g);
    RunOptions opts;
    opts.snapshot_every = 1;
    const auto t = run(u0, rate, 0.0, opts);
    CHECK(t.steps == 0);
    CHECK(t.snapshots.size() == 1);
    CHECK(t.series.size() == 1);
    CHECK_THROWS_AS(run(u0, rate, -1.0), InvalidArgument);
}

TEST_CASE("run: step count, time stamps and oscillation of the peak") {
    const auto g = stable_grid(32);
    const auto rate = DivisionRate::power_law(1.0, 2.0, g);
    const double period = std::numbers::ln2;
    const auto peak = run(sample_initial(Profile::peak(), g), rate, 5 * period);
    CHECK(peak.steps == static_cast<std::size_t>(std::ceil(5 * period / g.dt())));
    CHECK(peak.series.back().time == doctest::Approx(peak.steps * g.dt()));
    CHECK(peak.final_state.time() == doctest::Approx(peak.steps * g.dt()));
    const auto smooth = run(sample_initial(Profile::smooth(), g), rate, 5 * period);

    OscillationOptions o;
    o.burn_in_periods = 1.0;
    const auto mp = oscillation_metrics(peak, o);
    CHECK(mp.period == doctest::Approx(period).epsilon(0.03));
    const auto ms = oscillation_metrics(smooth, o);
    CHECK(ms.mean_amplitude < 0.2 * mp.mean_amplitude);
}

TEST_CASE("run: NaN in the initial state is rejected, overflow aborts with the step index") {
    const auto g = stable_grid(8);
    GridFunction bad(g.size(), Complex{1.0});
    bad[3] = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(StateVector(g, bad), InvalidArgument);

    GridFunction huge(g.size(), Complex{1e308});
    const auto rate = DivisionRate::power_law(1.0, 2.0, g);
    try {
        run(StateVector(g, huge), rate, 10.0);
        FAIL("expected a numerical abort");
    } catch (const NumericalError& e) {
        CHECK(e.step() >= 1);
    }
}

TEST_CASE("diffusive_reference_run: cfl bounds, spreading of a spike") {
    const auto g = build_grid(8, 40);
    const auto zero = DivisionRate::zero(g);
    const auto u = spike(g, 20);
    CHECK_THROWS_AS(diffusive_reference_run(u, zero, 1.0, 1.0), InvalidArgument);
    CHECK_THROWS_AS(diffusive_reference_run(u, zero, 0.0, 1.0), InvalidArgument);

    const double cfl = 0.9;
    const double dtp = cfl * g.dt();
    const double horizon = std::ceil(1.0 / dtp) * dtp;
    const auto t = diffusive_reference_run(u, zero, cfl, horizon);
    CHECK(t.variant == "diffusive");
    CHECK(t.dt == doctest::Approx(dtp));
    const double top = t.final_state.max_rescaled(0.0);
    std::size_t spread = 0;
    for (std::size_t k = 0; k < g.size(); ++k) spread += std::abs(t.final_state[k]) > 1e-3 * top ? 1 : 0;
    CHECK(spread >= 3);

    // the exact scheme keeps a single cell
    const auto e = run(u, zero, 5 * g.dt());
    std::size_t cells = 0;
    for (std::size_t k = 0; k < g.size(); ++k) cells += e.final_state[k] != Complex{} ? 1 : 0;
    CHECK(cells == 1);
}

TEST_CASE("diffusive_reference_run: amplitude decays while the exact run keeps it") {
    const auto g = stable_grid(32);
    const auto rate = DivisionRate::power_law(1.0, 2.0, g);
    const auto u0 = sample_initial(Profile::peak(), g);
    const double horizon = 10 * std::numbers::ln2;
    const auto d = oscillation_metrics(diffusive_reference_run(u0, rate, 0.9, horizon));
    const auto e = oscillation_metrics(run(u0, rate, horizon));
    CHECK(d.amplitude_slope < -0.02);
    CHECK(std::abs(e.amplitude_slope) < 0.01);
    for (std::size_t i = 1; i < d.amplitudes.size(); ++i) CHECK(d.amplitudes[i] < d.amplitudes[i - 1]);
}

TEST_CASE("run: balance drift decreases roughly linearly as n doubles") {
    auto drift = [](int n) {
        const auto g = stable_grid(n);
        const auto rate = DivisionRate::power_law(1.0, 2.0, g);
        const auto t = run(sample_initial(Profile::peak(), g), rate, 5 * std::numbers::ln2);
        double m = 0.0;
        for (const auto& p : balance_drift(t, 0)) m = std::max(m, p.drift);
        return m / t.series.front().first_moment;
    };
    const double a = drift(32), b = drift(64);
    CHECK(a / b == doctest::Approx(2.0).epsilon(0.3));
}
