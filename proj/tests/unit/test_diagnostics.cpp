#include "doctest.h"

#include <cmath>
#include <numbers>
#include <random>

#include "fixtures.hpp"
#include "gfrag/diagnostics.hpp"
#include "gfrag/errors.hpp"
#include "gfrag/profile.hpp"

using namespace gfrag;
using fixtures::perron;

namespace {

constexpr double kLn2 = std::numbers::ln2;

GridFunction times_U(const PerronSolution& P, const std::function<Complex(std::size_t)>& f) {
    GridFunction v(P.U.size());
    for (std::size_t k = 0; k < v.size(); ++k) v[k] = f(k) * P.U[k];
    return v;
}

}  // namespace

TEST_CASE("D2: vanishes on U and on every mode") {
    const auto& P = perron(32);
    const auto rate = fixtures::square_rate(32);
    CHECK(entropy_dissipation_D2(dominant_mode(P, 0), P, rate) == 0.0);
    for (int k : {1, 2, -3, 7}) CHECK(entropy_dissipation_D2(dominant_mode(P, k), P, rate) < 1e-12);
}

TEST_CASE("D2: octave indicator by hand on a coarse grid") {
    const auto g = build_grid(2, 4);
    const auto rate = DivisionRate::power_law(0.5, 1.0, g);
    PerronSolution P{.grid = g};
    P.U.assign(g.size(), 1.0);
    // u/U = 1 on indices 2..3, 0 elsewhere; pairs (k, k-2) for k = 2..8
    StateVector u(g);
    u[2] = 1.0;
    u[3] = 1.0;
    double expected = 0.0;
    for (std::size_t k = 2; k < g.size(); ++k) {
        const double r = u[k].real() - u[k - 2].real();
        expected += g.width(k) * g.x(k) * rate.sample(k) * r * r;
    }
    const double d2 = entropy_dissipation_D2(u, P, rate);
    CHECK(d2 > 0.0);
    CHECK(d2 == doctest::Approx(expected).epsilon(1e-14));
    // the cells that differ from their halves: 2, 3 (half 0, 1 are zero) and 4, 5 (halves 2, 3 are one)
    double by_hand = 0.0;
    for (std::size_t k : {2, 3, 4, 5}) by_hand += g.width(k) * g.x(k) * 0.5 * g.x(k);
    CHECK(d2 == doctest::Approx(by_hand).epsilon(1e-14));
}

TEST_CASE("D2: zero exactly for log 2 periodic ratios, positive otherwise") {
    const auto& P = perron(32);
    const auto rate = fixtures::square_rate(32);
    const std::size_t n = 32;
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> d(0.5, 1.5);
    std::vector<double> f(n);
    for (auto& v : f) v = d(rng);
    const auto periodic = times_U(P, [&](std::size_t k) { return Complex{f[k % n]}; });
    CHECK(entropy_dissipation_D2(periodic, P, rate) < 1e-12);
    auto broken = periodic;
    broken[100] *= 1.1;
    CHECK(entropy_dissipation_D2(broken, P, rate) > 1e-6);

    // quadratic scaling
    GridFunction twice(broken.size());
    for (std::size_t k = 0; k < twice.size(); ++k) twice[k] = 3.0 * broken[k];
    CHECK(entropy_dissipation_D2(twice, P, rate) ==
          doctest::Approx(9.0 * entropy_dissipation_D2(broken, P, rate)).epsilon(1e-12));
}

TEST_CASE("weighted_norm: normalization, homogeneity, nesting") {
    const auto& P = perron(32);
    const auto U = dominant_mode(P, 0);
    GridFunction U2(U.size());
    for (std::size_t k = 0; k < U.size(); ++k) U2[k] = 2.0 * U[k];
    for (double p : {1.0, 1.5, 2.0, 4.0, kInfinity}) {
        CAPTURE(p);
        CHECK(weighted_norm(U, P, p) == doctest::Approx(1.0).epsilon(1e-8));
        CHECK(weighted_norm(U2, P, p) == doctest::Approx(2.0).epsilon(1e-8));
    }
    std::mt19937_64 rng(4);
    std::normal_distribution<double> d;
    for (int trial = 0; trial < 20; ++trial) {
        const auto u = times_U(P, [&](std::size_t) { return Complex{d(rng), d(rng)}; });
        const double e1 = weighted_norm(u, P, 1.0), e2 = weighted_norm(u, P, 2.0);
        const double ei = weighted_norm(u, P, kInfinity);
        CHECK(e1 <= e2 * (1.0 + 1e-12));
        CHECK(e2 <= ei * (1.0 + 1e-12));
    }
    CHECK_THROWS_AS(weighted_norm(U, P, 0.5), InvalidArgument);
}

TEST_CASE("gre_functional: U e^t, zero state, monotone along a trajectory") {
    const auto& P = perron(32);
    const auto rate = fixtures::square_rate(32);
    const double t = 0.8;
    GridFunction v(P.U.size());
    for (std::size_t k = 0; k < v.size(); ++k) v[k] = P.U[k] * std::exp(t);
    CHECK(gre_functional(StateVector(P.grid, v, t), P, quadratic_entropy()) == doctest::Approx(1.0).epsilon(1e-10));

    const auto hinge = hinge_entropy(0.25);
    CHECK(gre_functional(StateVector(P.grid), P, hinge) == 0.0);
    const EntropyFunction shifted{"shifted", [](Complex z) { return std::norm(z - 2.0); }};
    CHECK(gre_functional(StateVector(P.grid), P, shifted) == doctest::Approx(4.0).epsilon(1e-10));

    // along the scheme the functional decays when u is rescaled by the scheme's moment growth
    // (1+dx per step); with e^{-t} it grows by about dx^2 per step
    const double r = moment_growth_rate(P.grid);
    auto u = sample_initial(Profile::smooth(), P.grid);
    const auto H = quadratic_entropy();
    double previous = gre_functional(u, P, H, r);
    for (int l = 1; l <= 200; ++l) {
        u = step(u, rate);
        const double now = gre_functional(u, P, H, r);
        CAPTURE(l);
        CHECK(now <= previous * (1.0 + 1e-8) + 1e-300);
        previous = now;
    }
}

TEST_CASE("balance_drift: zero state and the attractor itself") {
    const auto& P = perron(32);
    const auto rate = fixtures::square_rate(32);
    const auto zero = run(StateVector(P.grid), rate, kLn2);
    for (const auto& d : balance_drift(zero, 0)) CHECK(d.drift == 0.0);

    const auto t = run(StateVector(P.grid, dominant_mode(P, 0)), rate, kLn2);
    for (const auto& d : balance_drift(t, 0)) CHECK(d.drift <= 10.0 * P.grid.dx_rel());

    RunOptions every;
    every.snapshot_every = 1;
    const auto t1 = run(StateVector(P.grid, dominant_mode(P, 0)), rate, kLn2, every);
    const auto k1 = balance_drift(t1, 1);
    CHECK(k1.size() == t1.snapshots.size());
    CHECK(k1.front().drift == 0.0);
}

TEST_CASE("attractor_distance: U and a span of modes") {
    const auto& P = perron(64);
    const auto rate = fixtures::square_rate(64);
    const auto U = StateVector(P.grid, dominant_mode(P, 0));
    const auto cU = project(U, P, 4);
    CHECK(attractor_distance(U, cU, P) < 1e-4);
    const auto t = run(U, rate, 2 * kLn2);
    CHECK(attractor_distance(t.final_state, cU, P) < 0.1);

    GridFunction mix(P.U.size());
    const auto U1 = dominant_mode(P, 1);
    const auto U3 = dominant_mode(P, -3);
    for (std::size_t k = 0; k < mix.size(); ++k) mix[k] = 0.5 * U[k] + Complex{0.0, 0.2} * U1[k] + 0.1 * U3[k];
    const StateVector m(P.grid, mix);
    CHECK(attractor_distance(m, project(m, P, 4), P) < 1e-4);
    CHECK(attractor_distance(m, project(m, P, 2), P) == doctest::Approx(0.1).epsilon(1e-3));
}

TEST_CASE("cesaro_average: fixed point and errors") {
    const auto& P = perron(32);
    const auto rate = fixtures::square_rate(32);
    RunOptions every;
    every.snapshot_every = 1;
    const auto t = run(StateVector(P.grid, dominant_mode(P, 0)), rate, 4 * kLn2, every);
    const auto avg = cesaro_average(t);
    GridFunction diff(avg.size());
    for (std::size_t k = 0; k < avg.size(); ++k) diff[k] = avg[k] - P.U[k];
    // consistency error: discrete growth (1 + dx) e^{-dt} per step over 4 periods
    CHECK(weighted_norm(diff, P, 2.0) < 4 * kLn2 * P.grid.dx_rel());

    const auto empty = run(StateVector(P.grid), rate, 0.0);
    CHECK_THROWS_AS(cesaro_average(empty), InvalidArgument);
}

TEST_CASE("oscillation_metrics: synthetic sinusoid and too short series") {
    const double dt = 0.0214;
    std::vector<double> t, v;
    for (int i = 0; i < 800; ++i) {
        t.push_back(i * dt);
        v.push_back(2.0 + std::cos(2.0 * std::numbers::pi * t.back() / kLn2));
    }
    const auto m = oscillation_metrics(t, v);
    CHECK(std::abs(m.period - kLn2) <= dt);
    CHECK(std::abs(m.amplitude_slope) < 1e-3);
    CHECK(m.mean_amplitude == doctest::Approx(2.0).epsilon(1e-2));

    std::vector<double> ts(t.begin(), t.begin() + 110), vs(v.begin(), v.begin() + 110);
    CHECK_THROWS_AS(oscillation_metrics(ts, vs), InvalidArgument);

    // geometric decay of the amplitude
    std::vector<double> dv;
    for (double s : t) dv.push_back(2.0 + std::exp(-0.1 * s / kLn2) * std::cos(2.0 * std::numbers::pi * s / kLn2));
    CHECK(oscillation_metrics(t, dv).amplitude_slope == doctest::Approx(-0.1).epsilon(0.05));
}

TEST_CASE("entropy_report and hook") {
    const auto& P = perron(32);
    const auto rate = fixtures::square_rate(32);
    const auto u0 = sample_initial(Profile::peak(), P.grid);
    const auto c = project(u0, P, 8);
    ReportOptions opts;
    opts.coeffs = &c;
    const auto r = entropy_report(u0, P, rate, opts, 0.25);
    CHECK(r.E1 >= 0.0);
    CHECK(r.E1 <= r.E2);
    CHECK(r.E2 <= r.Einf);
    CHECK(r.D2 > 0.0);
    CHECK(r.gre_value == doctest::Approx(r.E2 * r.E2).epsilon(1e-12));
    CHECK(r.moments.size() == 2);
    CHECK(r.moments[0].real() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(r.attractor_distance >= 0.0);
    CHECK(r.mass_leak == 0.25);

    RunOptions ro;
    ro.hook = entropy_hook(P, rate, moment_growth_rate(P.grid));
    const auto t = run(u0, rate, kLn2, ro);
    for (std::size_t i = 1; i < t.series.size(); ++i) {
        CHECK(t.series[i].e2_norm <= t.series[i - 1].e2_norm * (1.0 + 1e-8));
        CHECK(t.series[i].d2 >= 0.0);
    }
}
