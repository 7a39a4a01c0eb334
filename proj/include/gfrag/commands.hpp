#pragma once

#include <exception>

#include "gfrag/config.hpp"
#include "gfrag/spectral.hpp"

#include "json.hpp"

namespace gfrag::cli {

/// Each command writes its artifacts under config.out_dir and returns the JSON summary it wrote.
nlohmann::json cmd_simulate(const RunConfig& config);
nlohmann::json cmd_eigen(const RunConfig& config);
nlohmann::json cmd_project(const RunConfig& config);
/// Exact and diffusive runs of the same configuration, executed concurrently.
nlohmann::json cmd_compare_schemes(const RunConfig& config);
/// Bundles figure1..figure4 (modes, initial conditions, max series, late snapshots).
nlohmann::json cmd_reproduce_figures(const RunConfig& config);

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitNumerical = 3;

/// 2 for rejected configurations (including stability), 3 for numerical aborts, 1 otherwise.
int exit_code_for(const std::exception& e);

/// Number of sign changes of the real part over cells where |value| exceeds tol * max.
int sign_changes(std::span<const Complex> values, double tol = 1e-8);
/// max_k |r_k - r_{k-1}| / max_k |r_k| with r = u/U on non-floored cells.
double relative_jump(std::span<const Complex> u, const PerronSolution& perron);

}  // namespace gfrag::cli
