/**
 * @file ledger.hpp
 * @brief Discrete-time bookkeeping for assets and trading strategies
 *
 * An asset is a triple of price, dividend and gain processes sampled on a
 * time grid, with the gain always derived as G = P + D. A strategy holds
 * positions theta(t_k) over (t_k, t_{k+1}]; rebalancing at t_{k+1} trades at
 * t_{k+1} prices. With that convention the discrete product rule is exact:
 *
 *   V(t_{k+1}) - V(t_k) = sum_i theta_i(t_k) dP_i(t_k)
 *                         + sum_i P_i(t_{k+1}) (theta_i(t_{k+1}) - theta_i(t_k))
 *
 * and a strategy is self-financing iff dV equals the strategy gain
 * sum_i theta_i(t_k) dG_i(t_k) at every step.
 */

#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace selffin {

/// Default residual tolerance (currency units) for exact bookkeeping checks.
inline constexpr double kDefaultResidualTolerance = 1e-10;

/// Strictly increasing sample instants in years, starting at 0.
class TimeGrid {
public:
    /// Throws DomainError unless there are >= 2 finite, strictly
    /// increasing instants with times[0] == 0.
    explicit TimeGrid(std::vector<double> times);

    /// `steps + 1` equally spaced instants on [0, horizon].
    static TimeGrid uniform(double horizon, std::size_t steps);

    std::size_t size() const noexcept { return times_.size(); }
    std::size_t steps() const noexcept { return times_.size() - 1; }
    double operator[](std::size_t k) const { return times_[k]; }
    double horizon() const noexcept { return times_.back(); }
    std::span<const double> times() const noexcept { return times_; }

    /// Length of interval k, i.e. t_{k+1} - t_k.
    double dt(std::size_t k) const { return times_[k + 1] - times_[k]; }

    bool operator==(const TimeGrid&) const = default;

private:
    std::vector<double> times_;
};

/// Values sampled on a TimeGrid.
class Series {
public:
    /// Throws GridMismatchError if the lengths differ.
    Series(TimeGrid grid, std::vector<double> values);

    const TimeGrid& grid() const noexcept { return grid_; }
    std::span<const double> values() const noexcept { return values_; }
    std::size_t size() const noexcept { return values_.size(); }
    double operator[](std::size_t k) const { return values_[k]; }

private:
    TimeGrid grid_;
    std::vector<double> values_;
};

/// An asset described by its price, cumulative dividend and gain processes.
///
/// Immutable; only `make_asset` builds one, so D(t_0) = 0 and
/// G(t_k) = P(t_k) + D(t_k) hold for every instance.
class AssetProcess {
public:
    const std::string& name() const noexcept { return name_; }
    const TimeGrid& grid() const noexcept { return grid_; }
    std::span<const double> price() const noexcept { return price_; }
    std::span<const double> dividend() const noexcept { return dividend_; }
    std::span<const double> gain() const noexcept { return gain_; }

    double price_increment(std::size_t k) const { return price_[k + 1] - price_[k]; }
    double dividend_increment(std::size_t k) const { return dividend_[k + 1] - dividend_[k]; }
    double gain_increment(std::size_t k) const { return gain_[k + 1] - gain_[k]; }

private:
    friend AssetProcess make_asset(const Series&, std::span<const double>, std::string);

    AssetProcess(TimeGrid grid, std::string name) : grid_(std::move(grid)), name_(std::move(name)) {}

    TimeGrid grid_;
    std::string name_;
    std::vector<double> price_;
    std::vector<double> dividend_;
    std::vector<double> gain_;
};

/// Builds an asset from its price series and per-interval dividend
/// increments (`increments[k]` is paid over (t_k, t_{k+1}]).
///
/// Throws GridMismatchError if `increments.size() != price.size() - 1` and
/// DomainError on non-finite input.
AssetProcess make_asset(const Series& price, std::span<const double> dividend_increments,
                        std::string name = {});

/// Positions in a fixed list of assets, one vector per grid instant.
class StrategyPath {
public:
    /// `positions[k][i]` is the number of units of asset i held over
    /// (t_k, t_{k+1}]. Throws GridMismatchError when assets disagree on the
    /// grid, the row count differs from the grid size, or a row has the
    /// wrong width; DomainError on an empty asset list or non-finite position.
    StrategyPath(std::vector<AssetProcess> assets, const std::vector<std::vector<double>>& positions);

    /// Same, with `columns[i][k]` the position in asset i at t_k.
    static StrategyPath from_columns(std::vector<AssetProcess> assets,
                                     const std::vector<std::vector<double>>& columns);

    const TimeGrid& grid() const noexcept { return assets_.front().grid(); }
    std::size_t asset_count() const noexcept { return assets_.size(); }
    std::size_t size() const noexcept { return grid().size(); }
    const AssetProcess& asset(std::size_t i) const { return assets_[i]; }
    std::span<const AssetProcess> assets() const noexcept { return assets_; }

    double position(std::size_t k, std::size_t i) const { return positions_[k * assets_.size() + i]; }

    /// The strategy restricted to every asset except `index`.
    StrategyPath without_asset(std::size_t index) const;

private:
    struct FlatTag {};
    StrategyPath(FlatTag, std::vector<AssetProcess> assets, std::vector<double> flat_positions);
    void validate() const;

    std::vector<AssetProcess> assets_;
    std::vector<double> positions_;  // row-major, size() x asset_count()
};

/// Per-step residuals of a self-financing test.
struct ResidualReport {
    std::vector<double> residuals;
    double max_abs = 0.0;
    bool is_self_financing = true;
    double tolerance = kDefaultResidualTolerance;

    /// Fills `max_abs` and `is_self_financing` from `residuals`.
    static ResidualReport from_residuals(std::vector<double> residuals, double tolerance);
};

/// V(t_k) = sum_i theta_i(t_k) P_i(t_k).
std::vector<double> portfolio_value(const StrategyPath& strategy);

/// dG(t_k) = sum_i theta_i(t_k) (G_i(t_{k+1}) - G_i(t_k)), k = 0..K-1.
std::vector<double> portfolio_gain_increments(const StrategyPath& strategy);

/// R(t_k) = [V(t_{k+1}) - V(t_k)] - dG(t_k). A strategy is self-financing
/// (zero portfolio dividend) iff every residual vanishes.
/// Throws DomainError if `tolerance <= 0`.
ResidualReport self_financing_residual(const StrategyPath& strategy,
                                       double tolerance = kDefaultResidualTolerance);

/// gap(t_k) = sum_i P_i(t_{k+1}) (theta_i(t_{k+1}) - theta_i(t_k)): the exact
/// difference between d(sum theta_i P_i) and sum theta_i dP_i. Identifying
/// the two, as in d(Delta S) = Delta dS, forces this to zero.
std::vector<double> leibniz_gap(const StrategyPath& strategy);

/// Self-financing residual of the subportfolio that excludes the cash asset
/// at `cash_index`. If the full portfolio is self-financing and the
/// subportfolio also is, the cash account can never be used to fund a
/// rebalance; a nonzero result on a rebalanced strategy exhibits that
/// contradiction. Throws DomainError if `cash_index` is out of range or the
/// strategy has a single asset.
ResidualReport bk_subportfolio_check(const StrategyPath& strategy, std::size_t cash_index,
                                     double tolerance = kDefaultResidualTolerance);

}  // namespace selffin
