#pragma once

#include <map>

#include "gfrag/rate.hpp"
#include "gfrag/spectral.hpp"

namespace fixtures {

/// Largest stable domain (N <= 8n) for B = x^2 at n points per octave.
inline gfrag::GeometricGrid stable_grid(int n) {
    const auto probe = gfrag::DivisionRate::power_law(1.0, 2.0, gfrag::build_grid(n, 1));
    return gfrag::build_grid(n, probe.max_admissible_half_extent(8 * n));
}

inline gfrag::DivisionRate square_rate(int n, gfrag::KernelMode mode = gfrag::KernelMode::standard) {
    return gfrag::DivisionRate::power_law(1.0, 2.0, stable_grid(n), mode);
}

/// Perron solutions are reused across test cases.
inline const gfrag::PerronSolution& perron(int n, gfrag::KernelMode mode = gfrag::KernelMode::standard) {
    static std::map<std::pair<int, int>, gfrag::PerronSolution> cache;
    const auto key = std::make_pair(n, static_cast<int>(mode));
    auto it = cache.find(key);
    if (it == cache.end()) it = cache.emplace(key, gfrag::perron_eigenvector(square_rate(n, mode))).first;
    return it->second;
}

}  // namespace fixtures
