#include "gfrag/rate.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "gfrag/errors.hpp"

namespace gfrag {

DivisionRate::DivisionRate(std::function<double(double)> rate, GeometricGrid grid, KernelMode mode,
                           std::optional<GrowthBounds> bounds, std::string description)
    : rate_(std::move(rate)), grid_(std::move(grid)), mode_(mode), bounds_(bounds),
      description_(std::move(description)) {
    if (!rate_) throw InvalidArgument("division rate: empty evaluator");
    samples_.resize(grid_.size());
    for (std::size_t k = 0; k < grid_.size(); ++k) {
        const double b = rate_(grid_.x(k));
        if (!std::isfinite(b) || !(b > 0.0)) {
            std::ostringstream os;
            os << "division rate must be finite and > 0, B(" << grid_.x(k) << ") = " << b;
            throw InvalidArgument(os.str());
        }
        samples_[k] = b;
        max_rate_ = std::max(max_rate_, b);
    }
    if (bounds_) {
        const auto& h = *bounds_;
        if (!(h.gamma0 > 0 && h.gamma1 > 0 && h.k0 > 0 && h.k1 > 0 && h.x0 >= 0))
            throw InvalidArgument("division rate: growth bound parameters must be positive");
        for (std::size_t k = 0; k < grid_.size(); ++k) {
            const double x = grid_.x(k);
            if (x < h.x0) continue;
            const double lo = h.k0 * std::pow(x, h.gamma0);
            const double hi = h.k1 * std::pow(x, h.gamma1);
            const double slack = 1e-12 * std::max(1.0, samples_[k]);
            if (samples_[k] < lo - slack || samples_[k] > hi + slack) {
                std::ostringstream os;
                os << "division rate violates its growth bounds at x = " << x;
                throw InvalidArgument(os.str());
            }
        }
    }
}

DivisionRate DivisionRate::power_law(double K, double gamma, GeometricGrid grid, KernelMode mode) {
    if (!(K > 0.0) || !(gamma > 0.0)) throw InvalidArgument("power-law rate needs K > 0 and gamma > 0");
    std::ostringstream os;
    os << "power_law(K=" << K << ",gamma=" << gamma << ")";
    return DivisionRate([K, gamma](double x) { return K * std::pow(x, gamma); }, std::move(grid), mode,
                        GrowthBounds{gamma, gamma, K, K, 0.0}, os.str());
}

DivisionRate DivisionRate::zero(GeometricGrid grid, KernelMode mode) {
    DivisionRate r([](double) { return 1.0; }, std::move(grid), mode, std::nullopt, "zero");
    r.rate_ = [](double) { return 0.0; };
    std::fill(r.samples_.begin(), r.samples_.end(), 0.0);
    r.max_rate_ = 0.0;
    return r;
}

DivisionRate DivisionRate::from_table(std::vector<double> xs, std::vector<double> rates, GeometricGrid grid,
                                      KernelMode mode) {
    if (xs.size() != rates.size() || xs.size() < 2) throw InvalidArgument("rate table needs >= 2 (x, B) rows");
    std::vector<std::size_t> order(xs.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return xs[a] < xs[b]; });
    std::vector<double> lx, lb;
    for (auto i : order) {
        if (!(xs[i] > 0.0) || !(rates[i] > 0.0)) throw InvalidArgument("rate table entries must be positive");
        if (!lx.empty() && std::log(xs[i]) <= lx.back()) throw InvalidArgument("rate table has duplicate x");
        lx.push_back(std::log(xs[i]));
        lb.push_back(std::log(rates[i]));
    }
    auto f = [lx, lb](double x) {
        const double y = std::log(x);
        std::size_t i = 0;
        if (y >= lx.back())
            i = lx.size() - 2;
        else if (y > lx.front())
            i = static_cast<std::size_t>(std::upper_bound(lx.begin(), lx.end(), y) - lx.begin()) - 1;
        const double s = (lb[i + 1] - lb[i]) / (lx[i + 1] - lx[i]);
        return std::exp(lb[i] + s * (y - lx[i]));
    };
    return DivisionRate(f, std::move(grid), mode, std::nullopt, "table");
}

void DivisionRate::require_certificate() const {
    if (certified()) return;
    std::ostringstream os;
    const int maxN = max_admissible_half_extent(8 * grid_.subdivisions());
    const int minn = min_admissible_subdivisions();
    os << "stability certificate violated: dt * max B = " << stability_number() << " > 1 (n = "
       << grid_.subdivisions() << ", N = " << grid_.half_extent() << "); admissible: N <= " << maxN
       << " at this n, or n >= " << minn << " at this domain extent";
    throw StabilityError(os.str(), stability_number(), maxN, minn);
}

int DivisionRate::max_admissible_half_extent(int limit) const {
    const int n = grid_.subdivisions();
    const double dt = grid_.dt();
    // B need not be monotone: the admissible N is the first index pair that breaks.
    double worst = rate_(1.0);
    if (worst * dt > 1.0) return 0;
    int best = 0;
    for (int N = 1; N <= limit; ++N) {
        const double lo = std::exp2(-static_cast<double>(N) / n);
        const double hi = std::exp2(static_cast<double>(N) / n);
        worst = std::max({worst, rate_(lo), rate_(hi)});
        if (worst * dt > 1.0) break;
        best = N;
    }
    return best;
}

int DivisionRate::min_admissible_subdivisions() const {
    if (!(max_rate_ > 0.0)) return 1;
    // dt(n) = 1 - 2^{-1/n} <= 1/max B  <=>  n >= ln 2 / -ln(1 - 1/max B)
    const double bound = 1.0 / max_rate_;
    if (bound >= 0.5) return 1;
    const double n = std::numbers::ln2 / -std::log1p(-bound);
    return static_cast<int>(std::ceil(n - 1e-9));
}

DivisionRate DivisionRate::on(const GeometricGrid& grid) const {
    if (max_rate_ == 0.0) return zero(grid, mode_);
    return DivisionRate(rate_, grid, mode_, bounds_, description_);
}

const char* to_string(KernelMode mode) { return mode == KernelMode::standard ? "standard" : "conservative"; }

KernelMode kernel_mode_from_string(const std::string& s) {
    if (s == "standard") return KernelMode::standard;
    if (s == "conservative") return KernelMode::conservative;
    throw InvalidArgument("unknown mode '" + s + "' (expected standard | conservative)");
}

}  // namespace gfrag
