#pragma once

#include <cstddef>
#include <vector>

#include "gfrag/grid.hpp"
#include "gfrag/profile.hpp"
#include "gfrag/rate.hpp"
#include "gfrag/state.hpp"

namespace gfrag {

struct PerronOptions {
    /// Stop when successive one-period averages differ by less than this in E1.
    double tolerance = 1e-12;
    std::size_t max_windows = 5000;
    /// Accept the result only if the per-step stationary defect is below this.
    double residual_tolerance = 1e-3;
    /// Cells with U < floor * max U are skipped by weighted inner products and norms.
    double floor = 1e-30;
};

/**
 * Positive stationary profile U of the rescaled scheme, normalized by
 * <U, phi> = 1 with phi(x) = x (standard) or phi = 1 (conservative).
 */
struct PerronSolution {
    GeometricGrid grid;
    KernelMode mode = KernelMode::standard;
    std::vector<double> U{};
    /// 1 in standard mode, 0 in conservative mode.
    double lambda = 1.0;
    /// ln(<S U, phi>/<U, phi>)/dt for one scheme step S; lambda + O(dx).
    double discrete_rate = 1.0;
    double normalization_error = 0.0;
    /// E1 norm of e^{-lambda dt} S U - U.
    double residual = 0.0;
    std::size_t windows = 0;
    double last_window_change = 0.0;
    double floor = 1e-30;

    /// Adjoint weight phi(x_k).
    double phi(std::size_t k) const { return mode == KernelMode::standard ? grid.x(k) : 1.0; }
    /// Exponent p with phi(x) = x^{p-1}.
    int moment_power() const { return mode == KernelMode::standard ? 2 : 1; }
    double max_value() const;
    bool floored(std::size_t k) const;
};

/// Cesaro means of the semigroup, rescaled by its measured growth per period, over windows of n steps (one discrete
/// period), iterated until two successive means agree. Throws ConvergenceError when
/// max_windows is exhausted or the residual exceeds options.residual_tolerance.
PerronSolution perron_eigenvector(const DivisionRate& rate, const StateVector& seed, const PerronOptions& options = {});
/// Seed exp(-(ln x)^2).
PerronSolution perron_eigenvector(const DivisionRate& rate, const PerronOptions& options = {});

/// Independent route: power iteration on the lazy operator (I + S/rho)/2, which has
/// the same Perron vector but no other eigenvalue on its spectral circle.
PerronSolution perron_power_crosscheck(const DivisionRate& rate, const PerronOptions& options = {});

/// Per-step defect ||e^{-lambda dt} S U - U||_{E1} of any candidate profile.
double stationary_residual(const std::vector<double>& U, const DivisionRate& rate);

/// x_j^{-2 i pi k / log 2} = exp(-2 i pi k (j - N)/n), evaluated from the exact residue.
Complex dyadic_phase(int k, std::size_t j, const GeometricGrid& grid);

/// U_k(x_j) = x_j^{-2 i pi k/log 2} U(x_j).
GridFunction dominant_mode(const PerronSolution& perron, int k);

/// (f, g) = sum_k w_k f_k conj(g_k) phi_k / U_k over non-floored cells.
Complex inner_product_E2(std::span<const Complex> f, std::span<const Complex> g, const PerronSolution& perron);

/// <u, phi_k> with phi_k = x^{p-1} x^{2 i pi k/log 2}.
Complex adjoint_moment(std::span<const Complex> u, int k, const GeometricGrid& grid,
                       KernelMode mode = KernelMode::standard);
Complex adjoint_moment(const StateVector& u, int k, KernelMode mode = KernelMode::standard);

/// Truncated family c_k = (u_0, U_k), k = -K..K.
struct ModeCoefficients {
    int K = 0;
    std::vector<Complex> coeffs;
    /// ||u_0||^2 - sum |c_k|^2
    double bessel_slack = 0.0;
    double norm_sq = 0.0;
    /// Gershgorin bound on the departure of the truncated family from orthonormality;
    /// zero for coefficients computed from an analytic profile.
    double gram_defect = 0.0;

    Complex at(int k) const { return coeffs[static_cast<std::size_t>(k + K)]; }
    double energy() const;
};

/// Largest K whose modes are distinct on the grid: floor((n-1)/2).
int max_resolvable_modes(const GeometricGrid& grid);

/// Projection of a grid state with E2 inner products. Requires 0 <= K <= (n-1)/2;
/// throws InvalidArgument when sum |c_k|^2 exceeds ||u||^2 by more than
/// (1e-10 + gram_defect) ||u||^2.
ModeCoefficients project(const StateVector& u0, const PerronSolution& perron, int K);

struct ProfileQuadrature {
    /// Integration in y = ln x over [ln x_min - below, ln x_max + above].
    double below = 30.0;
    double above = 6.0;
    /// Uniform step in y; 0 picks min(1e-3, log 2 / (16 (K+1))).
    double step = 0.0;
};

/// c_k = <u_0, phi_k> for an analytic profile, by the trapezoid rule in ln x (spectrally
/// accurate for smooth profiles, free of grid aliasing). Any K >= 0.
ModeCoefficients project_profile(const Profile& u0, const PerronSolution& perron, int K,
                                 const ProfileQuadrature& quad = {});

/// sum_{|k|<=K} c_k e^{2 i pi k t/log 2} U_k, with t reduced modulo log 2.
StateVector periodic_limit_eval(const ModeCoefficients& coeffs, const PerronSolution& perron, double t);

/// log 2 U(x) sum_l y_l^p u_0(y_l), y_l = 2^{-l} x e^{-t}, over the l with y_l in [x_min/2, 2 x_max].
/// The factor log 2 is the 1/period of the Poisson summation formula; it makes this form
/// equal to the modal one.
StateVector poisson_limit_eval(const Profile& u0, const PerronSolution& perron, double t);

}  // namespace gfrag
