/**
 * @file funding_pde.hpp
 * @brief Finite-difference solver for the collateralized funding PDE
 *
 * Solves, backward from the payoff at T,
 *
 *   dV/dt + 1/2 sigma^2 S^2 d2V/dS2 + (r_R - r_D) S dV/dS
 *         - r_C C - r_F (V - C) = 0,    C = gamma V,
 *
 * which is linear with discount rate r_eff = gamma r_C + (1 - gamma) r_F.
 * The hedge ratio of the replicating strategy is Delta = dV/dS.
 *
 * Uniform S grid on [0, S_max], S_max = s_max_multiple * max(spot,
 * reference level); theta-scheme in time with Rannacher (fully implicit)
 * startup steps; Dirichlet far-field boundaries from the payoff asymptotes.
 */

#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "selffin/market.hpp"

namespace selffin {

struct GridSpec {
    std::size_t s_nodes = 400;     ///< spatial nodes including both boundaries
    std::size_t t_steps = 400;
    double s_max_multiple = 5.0;
    double scheme_theta = 0.5;     ///< 0 explicit, 0.5 Crank-Nicolson, 1 implicit
    std::size_t rannacher_steps = 2;  ///< implicit startup steps when 0 < theta < 1

    /// Throws DomainError unless s_nodes >= 3, t_steps >= 1,
    /// s_max_multiple >= 3 and 0 <= scheme_theta <= 1.
    void validate() const;
};

/// Dense row-major surface indexed by (time index, spot index).
struct Surface {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> data;

    double operator()(std::size_t j, std::size_t i) const { return data[j * cols + i]; }
    double& operator()(std::size_t j, std::size_t i) { return data[j * cols + i]; }
    std::span<const double> row(std::size_t j) const { return {data.data() + j * cols, cols}; }
};

/// Value and hedge-ratio surfaces on the (t, S) lattice. Row j is calendar
/// time t_j = j T / t_steps; row t_steps is the payoff.
class PdeSolution {
public:
    PdeSolution(MarketParams market, CollateralPolicy policy, Payoff payoff, GridSpec grid, double s_max,
                Surface values, std::vector<std::string> warnings);

    const MarketParams& market() const noexcept { return market_; }
    const CollateralPolicy& policy() const noexcept { return policy_; }
    const Payoff& payoff() const noexcept { return payoff_; }
    const GridSpec& grid_spec() const noexcept { return grid_; }

    double s_max() const noexcept { return s_max_; }
    double ds() const noexcept { return ds_; }
    double dt() const noexcept { return dt_; }
    std::span<const double> times() const noexcept { return times_; }
    std::span<const double> spots() const noexcept { return spots_; }

    const Surface& values() const noexcept { return values_; }
    const Surface& deltas() const noexcept { return deltas_; }

    /// Non-fatal diagnostics, e.g. an explicit step beyond the CFL limit.
    const std::vector<std::string>& warnings() const noexcept { return warnings_; }

private:
    MarketParams market_;
    CollateralPolicy policy_;
    Payoff payoff_;
    GridSpec grid_;
    double s_max_;
    double ds_;
    double dt_;
    std::vector<double> times_;
    std::vector<double> spots_;
    Surface values_;
    Surface deltas_;
    std::vector<std::string> warnings_;
};

/// Throws DomainError on invalid inputs or when spot does not lie between
/// interior nodes (grid too coarse); NumericError if a tridiagonal solve
/// breaks down or produces non-finite values.
PdeSolution solve_funding_pde(const MarketParams& market, const CollateralPolicy& policy, const Payoff& payoff,
                              const GridSpec& grid = {});

/// dV/dS by central differences in the interior and second-order one-sided
/// differences at S = 0 and S = S_max.
Surface delta_surface(const Surface& values, double ds);
Surface delta_surface(const PdeSolution& solution);

/// Bilinear interpolation of the value surface. Throws DomainError when
/// (t, s) is outside [0, T] x [0, S_max].
double price_at(const PdeSolution& solution, double t, double s);

/// Bilinear interpolation of the delta surface; same domain as `price_at`.
double delta_at(const PdeSolution& solution, double t, double s);

}  // namespace selffin
