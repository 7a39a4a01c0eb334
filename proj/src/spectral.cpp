#include "gfrag/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>

#include "gfrag/errors.hpp"
#include "gfrag/scheme.hpp"

namespace gfrag {

namespace {

constexpr double kLn2 = std::numbers::ln2;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

double phi_weight(const GeometricGrid& grid, KernelMode mode, std::size_t k) {
    return mode == KernelMode::standard ? grid.x(k) : 1.0;
}

double moment_of(std::span<const Complex> u, const GeometricGrid& grid, KernelMode mode) {
    return adjoint_first_moment(u, grid, mode).real();
}

/// sum_k w_k phi_k |a_k - b_k|
double e1_distance(std::span<const Complex> a, std::span<const Complex> b, const GeometricGrid& grid,
                   KernelMode mode) {
    double s = 0.0;
    for (std::size_t k = 1; k < a.size(); ++k) s += grid.width(k) * phi_weight(grid, mode, k) * std::abs(a[k] - b[k]);
    return s;
}

void normalize(StateVector& u, KernelMode mode) {
    const double m = moment_of(u.values(), u.grid(), mode);
    if (!(m > 0.0) || !std::isfinite(m)) throw NumericalError("perron: adjoint moment vanished or overflowed", 0);
    u *= Complex{1.0 / m, 0.0};
}

StateVector default_seed(const GeometricGrid& grid) {
    GridFunction v(grid.size());
    for (std::size_t k = 0; k < grid.size(); ++k) {
        const double y = std::log(grid.x(k));
        v[k] = std::exp(-y * y);
    }
    return StateVector(grid, std::move(v));
}

PerronSolution finish(const DivisionRate& rate, const StateVector& avg, std::size_t windows, double change,
                      const PerronOptions& options) {
    const auto& grid = rate.grid();
    const KernelMode mode = rate.mode();
    PerronSolution sol{.grid = grid, .mode = mode};
    sol.U.resize(grid.size());
    for (std::size_t k = 0; k < grid.size(); ++k) sol.U[k] = avg[k].real();
    sol.lambda = nominal_eigenvalue(mode);
    sol.windows = windows;
    sol.last_window_change = change;
    sol.floor = options.floor;

    double m = 0.0;
    for (std::size_t k = 1; k < grid.size(); ++k) m += sol.U[k] * sol.phi(k) * grid.width(k);
    sol.normalization_error = std::abs(m - 1.0);

    GridFunction cu(sol.U.begin(), sol.U.end());
    const auto next = step(StateVector(grid, cu), rate);
    sol.discrete_rate = std::log(moment_of(next.values(), grid, mode) / m) / grid.dt();
    sol.residual = stationary_residual(sol.U, rate);

    for (std::size_t k = 1; k < grid.size(); ++k) {
        if (!(sol.U[k] > 0.0)) throw NumericalError("perron: profile is not positive at index " + std::to_string(k), 0);
    }
    if (sol.residual > options.residual_tolerance) {
        std::ostringstream os;
        os << "perron: stationary residual " << sol.residual << " exceeds tolerance " << options.residual_tolerance;
        throw ConvergenceError(os.str(), sol.residual);
    }
    return sol;
}

}  // namespace

double PerronSolution::max_value() const { return U.empty() ? 0.0 : *std::max_element(U.begin(), U.end()); }

bool PerronSolution::floored(std::size_t k) const { return !(U[k] >= floor * max_value()) || U[k] <= 0.0; }

double stationary_residual(const std::vector<double>& U, const DivisionRate& rate) {
    const auto& grid = rate.grid();
    if (U.size() != grid.size()) throw InvalidArgument("stationary residual: length mismatch");
    GridFunction cu(U.begin(), U.end());
    const StateVector u(grid, cu);
    const auto next = step(u, rate);
    const double decay = std::exp(-nominal_eigenvalue(rate.mode()) * grid.dt());
    double s = 0.0;
    for (std::size_t k = 1; k < U.size(); ++k) {
        s += grid.width(k) * phi_weight(grid, rate.mode(), k) * std::abs(decay * next[k] - cu[k]);
    }
    return s;
}

PerronSolution perron_eigenvector(const DivisionRate& rate, const StateVector& seed, const PerronOptions& options) {
    rate.require_certificate();
    const auto& grid = rate.grid();
    if (!seed.grid().same_as(grid)) throw InvalidArgument("perron: seed lives on a different grid");
    if (!seed.is_real(0.0)) throw InvalidArgument("perron: seed must be real");
    for (std::size_t k = 0; k < seed.size(); ++k) {
        if (seed[k].real() < 0.0) throw InvalidArgument("perron: seed must be nonnegative");
    }
    const KernelMode mode = rate.mode();
    const std::size_t n = static_cast<std::size_t>(grid.subdivisions());

    StateVector u = seed;
    normalize(u, mode);
    std::optional<StateVector> previous;
    double change = std::numeric_limits<double>::infinity();

    std::vector<StateVector> window;
    window.reserve(n + 1);
    for (std::size_t w = 1; w <= options.max_windows; ++w) {
        // one discrete period: the peripheral eigenvalues rho w^m all return to rho^n, so
        // weighting snapshot l by rho^{-l} cancels every rotating component exactly
        window.assign(1, u);
        for (std::size_t l = 0; l < n; ++l) window.push_back(step(window.back(), rate));
        const double m0 = moment_of(window.front().values(), grid, mode);
        const double mn = moment_of(window.back().values(), grid, mode);
        if (!(mn > 0.0) || !std::isfinite(mn)) throw NumericalError("perron: adjoint moment vanished or overflowed", w);
        const double inv_rho = std::pow(m0 / mn, 1.0 / static_cast<double>(n));
        StateVector acc(grid);
        double weight = 1.0;
        for (std::size_t l = 0; l < n; ++l) {
            auto term = window[l];
            term *= Complex{weight, 0.0};
            acc += term;
            weight *= inv_rho;
        }
        normalize(acc, mode);
        u = std::move(window.back());
        normalize(u, mode);
        if (previous) {
            change = e1_distance(acc.values(), previous->values(), grid, mode);
            if (change < options.tolerance) return finish(rate, acc, w, change, options);
        }
        previous = std::move(acc);
    }
    std::ostringstream os;
    os << "perron: window averages still differ by " << change << " after " << options.max_windows << " windows";
    throw ConvergenceError(os.str(), change);
}

PerronSolution perron_eigenvector(const DivisionRate& rate, const PerronOptions& options) {
    return perron_eigenvector(rate, default_seed(rate.grid()), options);
}

PerronSolution perron_power_crosscheck(const DivisionRate& rate, const PerronOptions& options) {
    rate.require_certificate();
    const auto& grid = rate.grid();
    const KernelMode mode = rate.mode();
    StateVector v = default_seed(grid);
    normalize(v, mode);
    double change = std::numeric_limits<double>::infinity();
    const std::size_t max_iter = options.max_windows * static_cast<std::size_t>(grid.subdivisions()) * 4;
    for (std::size_t it = 1; it <= max_iter; ++it) {
        StateVector sv = step(v, rate);
        const double rho = moment_of(sv.values(), grid, mode);
        sv *= Complex{1.0 / rho, 0.0};
        StateVector next = v + sv;
        normalize(next, mode);
        change = e1_distance(next.values(), v.values(), grid, mode);
        v = std::move(next);
        if (change < options.tolerance) return finish(rate, v, it, change, options);
    }
    throw ConvergenceError("perron cross-check: power iteration did not converge", change);
}

Complex dyadic_phase(int k, std::size_t j, const GeometricGrid& grid) {
    const long long n = grid.subdivisions();
    const long long e = static_cast<long long>(j) - grid.half_extent();
    // reduce k (j - N) modulo n in integers so that x and 2x share bitwise the same phase
    long long r = (static_cast<long long>(k) % n) * (e % n) % n;
    if (r < 0) r += n;
    if (r == 0) return {1.0, 0.0};
    const double theta = -kTwoPi * static_cast<double>(r) / static_cast<double>(n);
    return {std::cos(theta), std::sin(theta)};
}

GridFunction dominant_mode(const PerronSolution& perron, int k) {
    GridFunction out(perron.U.size());
    for (std::size_t j = 0; j < out.size(); ++j) out[j] = dyadic_phase(k, j, perron.grid) * perron.U[j];
    return out;
}

Complex inner_product_E2(std::span<const Complex> f, std::span<const Complex> g, const PerronSolution& perron) {
    const auto& grid = perron.grid;
    if (f.size() != grid.size() || g.size() != grid.size()) throw InvalidArgument("E2 product: length mismatch");
    const double cut = perron.floor * perron.max_value();
    Complex s{0.0, 0.0};
    bool any = false;
    for (std::size_t k = 1; k < f.size(); ++k) {
        const double Uk = perron.U[k];
        if (!(Uk > 0.0) || Uk < cut) continue;
        any = true;
        s += f[k] * std::conj(g[k]) * (grid.width(k) * perron.phi(k) / Uk);
    }
    if (!any) throw InvalidArgument("E2 product: every cell is below the floor");
    return s;
}

Complex adjoint_moment(std::span<const Complex> u, int k, const GeometricGrid& grid, KernelMode mode) {
    if (u.size() != grid.size()) throw InvalidArgument("adjoint moment: length mismatch");
    Complex s{0.0, 0.0};
    for (std::size_t j = 1; j < u.size(); ++j) {
        // x^{2 i pi k/log 2} = conj of the mode phase
        s += u[j] * std::conj(dyadic_phase(k, j, grid)) * (phi_weight(grid, mode, j) * grid.width(j));
    }
    return s;
}

Complex adjoint_moment(const StateVector& u, int k, KernelMode mode) {
    return adjoint_moment(u.values(), k, u.grid(), mode);
}

double ModeCoefficients::energy() const {
    double e = 0.0;
    for (const auto& c : coeffs) e += std::norm(c);
    return e;
}

int max_resolvable_modes(const GeometricGrid& grid) { return (grid.subdivisions() - 1) / 2; }

ModeCoefficients project(const StateVector& u0, const PerronSolution& perron, int K) {
    if (!u0.grid().same_as(perron.grid)) throw InvalidArgument("project: state and perron live on different grids");
    if (K < 0) throw InvalidArgument("project: K must be >= 0");
    if (K > max_resolvable_modes(perron.grid)) {
        throw InvalidArgument("project: K = " + std::to_string(K) + " aliases on a grid with n = " +
                              std::to_string(perron.grid.subdivisions()) + " (max " +
                              std::to_string(max_resolvable_modes(perron.grid)) + ")");
    }
    ModeCoefficients mc;
    mc.K = K;
    mc.coeffs.reserve(static_cast<std::size_t>(2 * K + 1));
    for (int k = -K; k <= K; ++k) {
        const auto mode = dominant_mode(perron, k);
        mc.coeffs.push_back(inner_product_E2(u0.values(), mode, perron));
    }
    mc.norm_sq = inner_product_E2(u0.values(), u0.values(), perron).real();
    mc.bessel_slack = mc.norm_sq - mc.energy();

    // Gram matrix of the truncated family is Toeplitz in l - k; bound its largest eigenvalue
    const auto base = dominant_mode(perron, 0);
    for (int d = 1; d <= 2 * K; ++d) {
        mc.gram_defect += 2.0 * std::abs(inner_product_E2(dominant_mode(perron, d), base, perron));
    }
    if (mc.bessel_slack < -(1e-10 + mc.gram_defect) * mc.norm_sq) {
        std::ostringstream os;
        os << "project: Bessel inequality violated, slack " << mc.bessel_slack << " for norm^2 " << mc.norm_sq;
        throw InvalidArgument(os.str());
    }
    return mc;
}

ModeCoefficients project_profile(const Profile& u0, const PerronSolution& perron, int K,
                                 const ProfileQuadrature& quad) {
    if (K < 0) throw InvalidArgument("project_profile: K must be >= 0");
    if (!u0.evaluator) throw InvalidArgument("project_profile: profile has no evaluator");
    const auto& grid = perron.grid;
    const double h = quad.step > 0.0 ? quad.step : std::min(1e-3, kLn2 / (16.0 * (K + 1)));
    const double y0 = std::log(grid.x_min()) - quad.below;
    const double y1 = std::log(grid.x_max()) + quad.above;
    const auto m = static_cast<std::size_t>(std::ceil((y1 - y0) / h));
    const int p = perron.moment_power();

    ModeCoefficients mc;
    mc.K = K;
    mc.coeffs.assign(static_cast<std::size_t>(2 * K + 1), Complex{0.0, 0.0});
    for (std::size_t i = 0; i <= m; ++i) {
        const double y = y0 + static_cast<double>(i) * h;
        const double x = std::exp(y);
        const Complex v = u0(x);
        if (v == Complex{0.0, 0.0}) continue;
        const double weight = (i == 0 || i == m) ? 0.5 * h : h;
        // dx = x dy, so x^{p-1} dx = x^p dy
        const Complex base = v * (std::pow(x, p) * weight);
        const Complex z = std::polar(1.0, kTwoPi * y / kLn2);
        Complex zk{1.0, 0.0};
        for (int k = 0; k <= K; ++k) {
            mc.coeffs[static_cast<std::size_t>(K + k)] += base * zk;
            if (k > 0) mc.coeffs[static_cast<std::size_t>(K - k)] += base * std::conj(zk);
            zk *= z;
        }
    }
    const auto sampled = sample_initial(u0, grid);
    mc.norm_sq = inner_product_E2(sampled.values(), sampled.values(), perron).real();
    mc.bessel_slack = mc.norm_sq - mc.energy();
    return mc;
}

StateVector periodic_limit_eval(const ModeCoefficients& coeffs, const PerronSolution& perron, double t) {
    const auto& grid = perron.grid;
    double tau = std::fmod(t, kLn2);
    if (tau < 0.0) tau += kLn2;
    GridFunction out(grid.size(), Complex{0.0, 0.0});
    for (int k = -coeffs.K; k <= coeffs.K; ++k) {
        const Complex c = coeffs.at(k);
        if (c == Complex{0.0, 0.0}) continue;
        const Complex rot = k == 0 ? Complex{1.0, 0.0} : std::polar(1.0, kTwoPi * k * tau / kLn2);
        const Complex a = c * rot;
        for (std::size_t j = 0; j < out.size(); ++j) out[j] += a * dyadic_phase(k, j, grid) * perron.U[j];
    }
    return StateVector(grid, std::move(out), std::max(t, 0.0));
}

StateVector poisson_limit_eval(const Profile& u0, const PerronSolution& perron, double t) {
    if (!u0.evaluator) throw InvalidArgument("poisson_limit_eval: profile has no evaluator");
    const auto& grid = perron.grid;
    const int p = perron.moment_power();
    const double lo = 0.5 * grid.x_min();
    const double hi = 2.0 * grid.x_max();
    const double et = std::exp(-t);
    GridFunction out(grid.size(), Complex{0.0, 0.0});
    for (std::size_t j = 0; j < out.size(); ++j) {
        const double z = grid.x(j) * et;
        // y_l = 2^{-l} z lies in [lo, hi] iff log2(z/hi) <= l <= log2(z/lo)
        const int lmin = static_cast<int>(std::ceil(std::log2(z / hi) - 1e-12));
        const int lmax = static_cast<int>(std::floor(std::log2(z / lo) + 1e-12));
        Complex s{0.0, 0.0};
        for (int l = lmin; l <= lmax; ++l) {
            const double y = std::ldexp(z, -l);
            s += std::pow(y, p) * u0(y);
        }
        out[j] = kLn2 * perron.U[j] * s;
    }
    return StateVector(grid, std::move(out), std::max(t, 0.0));
}

}  // namespace gfrag
