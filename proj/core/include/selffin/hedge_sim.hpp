/**
 * @file hedge_sim.hpp
 * @brief Monte-Carlo discrete hedging of a PDE-priced claim
 *
 * The replicating strategy holds three accounts:
 *   1. a repo position in the stock, price 0, gain dS + (r_D - r_R) S dt,
 *   2. the collateral account, price C, gain r_C C dt,
 *   3. the unsecured funding account, price alpha, gain r_F alpha dt,
 * with positions (Delta, 1, 1). Every rebalance is financed through the
 * funding account, so alpha = V - C at each step and the strategy value
 * moves only by its gains.
 *
 * Two falsification modes run next to it on the same random numbers:
 * bookkeeping by d(gamma) = dV - Delta dS (stock marked at Delta S, cash
 * gamma), and a hedge frozen at its initial Delta.
 */

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "selffin/funding_pde.hpp"
#include "selffin/ledger.hpp"
#include "selffin/market.hpp"

namespace selffin {

struct PathSpec {
    std::size_t n_paths = 1;
    std::size_t n_steps = 1;
    std::uint64_t seed = 0;
    MarketParams market;
    std::optional<double> drift;  ///< real-world mu; defaults to r_R - r_D

    double real_world_drift() const noexcept { return drift.value_or(market.carry()); }

    /// Throws DomainError unless n_paths >= 1, n_steps >= 1, the market is
    /// valid and the drift (if set) is finite.
    void validate() const;
};

enum class EngineMode { correct, erroneous_star, erroneous_constant_delta };

std::string_view to_string(EngineMode mode);
/// Throws DomainError for an unknown name.
EngineMode parse_engine_mode(std::string_view name);

/// Path `path_index` of the spec: S_{k+1} = S_k exp((mu - sigma^2/2) dt +
/// sigma sqrt(dt) Z_k) on a uniform grid, Z_k = CounterNormal(seed)(path, k).
Series simulate_gbm_path(const PathSpec& spec, std::size_t path_index);
std::vector<Series> simulate_gbm_paths(const PathSpec& spec);

struct HedgeEntry {
    double pnl = 0.0;                  ///< V_strategy(T) - payoff(S_T)
    double ledger_residual_max = 0.0;  ///< max |self-financing residual| of the exported strategy
    double leakage_total = 0.0;        ///< accumulated Leibniz gap
};

struct Replication {
    HedgeEntry entry;
    std::vector<double> deltas;  ///< Delta_k held over (t_k, t_{k+1}]
    StrategyPath ledger;         ///< strategy in ledger form
};

/// Runs one path through the strategy of `mode`.
///
/// In `correct` and `erroneous_constant_delta` the ledger is
/// [repo, collateral, funding]; in `erroneous_star` it is [stock, cash]
/// where the stock pays no dividend and cash moves by dV - Delta dS.
/// There leakage_total is the terminal book inconsistency
/// (Delta S + gamma) - V, which equals sum_k S_{k+1} (Delta_{k+1} - Delta_k).
///
/// Throws DomainError if the path leaves the PDE grid or its horizon differs
/// from the solution's.
Replication replicate_traced(const PdeSolution& solution, const Series& path, EngineMode mode);
HedgeEntry replicate(const PdeSolution& solution, const Series& path, EngineMode mode);

/// Position of the cash account in `with_explicit_cash` strategies.
inline constexpr std::size_t kExplicitCashIndex = 1;

/// Recasts a [repo, collateral, funding] ledger as [stock, cash]: the stock
/// held outright (price S, dividends r_D S dt) and every cash balance merged
/// into one account of value V - Delta S accruing -r_R Delta S + r_C C +
/// r_F alpha. Same portfolio, so the same zero residual; the stock-only
/// subportfolio is what a cash-excluding self-financing condition tests.
/// Throws DomainError for an `erroneous_star` replication.
StrategyPath with_explicit_cash(const Replication& replication, const Series& path, const MarketParams& market);

struct PnlStats {
    double mean = 0.0;
    double std_dev = 0.0;    ///< sample standard deviation
    double std_error = 0.0;  ///< std_dev / sqrt(n)
};

/// Compensated (Neumaier) sums in index order. Throws DomainError if empty.
PnlStats summarize(std::span<const double> xs);

struct HedgeReport {
    EngineMode mode = EngineMode::correct;
    std::size_t n_steps = 0;
    std::vector<double> pnl;
    std::vector<double> ledger_residual_max;
    std::vector<double> leakage_total;
    PnlStats stats;
};

/// Simulates every path of `spec` once and replicates it in each mode, so
/// modes see common random numbers. Work is split over `threads` workers;
/// results depend only on (seed, path, step). Throws PathDomainError naming
/// the lowest failing path index.
std::vector<HedgeReport> run_hedge(const PdeSolution& solution, const PathSpec& spec,
                                   std::span<const EngineMode> modes, unsigned threads = 1);
HedgeReport run_hedge(const PdeSolution& solution, const PathSpec& spec, EngineMode mode, unsigned threads = 1);

struct ConvergenceRow {
    std::size_t n_steps = 0;
    PnlStats stats;
    /// std(n) / std(2n) when the next row has twice the steps and nonzero std.
    std::optional<double> std_ratio;
};

/// One row per report, in input order. Throws DomainError if empty.
std::vector<ConvergenceRow> pnl_stats(std::span<const HedgeReport> reports);

}  // namespace selffin
