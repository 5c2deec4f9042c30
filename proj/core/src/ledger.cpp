#include "selffin/ledger.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "selffin/errors.hpp"

namespace selffin {

namespace {

bool all_finite(std::span<const double> xs) {
    return std::all_of(xs.begin(), xs.end(), [](double x) { return std::isfinite(x); });
}

}  // namespace

TimeGrid::TimeGrid(std::vector<double> times) : times_(std::move(times)) {
    if (times_.size() < 2) {
        throw DomainError("time grid needs at least 2 instants");
    }
    if (!all_finite(times_)) {
        throw DomainError("time grid contains a non-finite instant");
    }
    if (times_.front() != 0.0) {
        throw DomainError("time grid must start at t = 0");
    }
    for (std::size_t k = 1; k < times_.size(); ++k) {
        if (!(times_[k] > times_[k - 1])) {
            throw DomainError("time grid must be strictly increasing (index " + std::to_string(k) + ")");
        }
    }
}

TimeGrid TimeGrid::uniform(double horizon, std::size_t steps) {
    if (steps == 0 || !(horizon > 0.0) || !std::isfinite(horizon)) {
        throw DomainError("uniform grid needs steps >= 1 and a finite horizon > 0");
    }
    std::vector<double> times(steps + 1);
    for (std::size_t k = 0; k <= steps; ++k) {
        times[k] = horizon * static_cast<double>(k) / static_cast<double>(steps);
    }
    return TimeGrid(std::move(times));
}

Series::Series(TimeGrid grid, std::vector<double> values) : grid_(std::move(grid)), values_(std::move(values)) {
    if (values_.size() != grid_.size()) {
        throw GridMismatchError("series has " + std::to_string(values_.size()) + " values for a grid of " +
                                std::to_string(grid_.size()) + " instants");
    }
}

AssetProcess make_asset(const Series& price, std::span<const double> dividend_increments, std::string name) {
    if (dividend_increments.size() + 1 != price.size()) {
        throw GridMismatchError("expected " + std::to_string(price.size() - 1) + " dividend increments, got " +
                                std::to_string(dividend_increments.size()));
    }
    if (!all_finite(price.values()) || !all_finite(dividend_increments)) {
        throw DomainError("asset '" + name + "' has non-finite price or dividend input");
    }

    AssetProcess asset(price.grid(), std::move(name));
    const std::size_t n = price.size();
    asset.price_.assign(price.values().begin(), price.values().end());
    asset.dividend_.resize(n);
    asset.gain_.resize(n);
    asset.dividend_[0] = 0.0;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        asset.dividend_[k + 1] = asset.dividend_[k] + dividend_increments[k];
    }
    for (std::size_t k = 0; k < n; ++k) {
        asset.gain_[k] = asset.price_[k] + asset.dividend_[k];
    }
    return asset;
}

StrategyPath::StrategyPath(std::vector<AssetProcess> assets, const std::vector<std::vector<double>>& positions)
    : assets_(std::move(assets)) {
    if (assets_.empty()) {
        throw DomainError("strategy needs at least one asset");
    }
    if (positions.size() != assets_.front().grid().size()) {
        throw GridMismatchError("strategy has " + std::to_string(positions.size()) + " position rows for a grid of " +
                                std::to_string(assets_.front().grid().size()) + " instants");
    }
    positions_.reserve(positions.size() * assets_.size());
    for (std::size_t k = 0; k < positions.size(); ++k) {
        if (positions[k].size() != assets_.size()) {
            throw GridMismatchError("position row " + std::to_string(k) + " has " +
                                    std::to_string(positions[k].size()) + " entries for " +
                                    std::to_string(assets_.size()) + " assets");
        }
        positions_.insert(positions_.end(), positions[k].begin(), positions[k].end());
    }
    validate();
}

StrategyPath::StrategyPath(FlatTag, std::vector<AssetProcess> assets, std::vector<double> flat_positions)
    : assets_(std::move(assets)), positions_(std::move(flat_positions)) {
    validate();
}

StrategyPath StrategyPath::from_columns(std::vector<AssetProcess> assets,
                                        const std::vector<std::vector<double>>& columns) {
    if (assets.empty()) {
        throw DomainError("strategy needs at least one asset");
    }
    if (columns.size() != assets.size()) {
        throw GridMismatchError("got " + std::to_string(columns.size()) + " position columns for " +
                                std::to_string(assets.size()) + " assets");
    }
    const std::size_t n = assets.front().grid().size();
    const std::size_t m = assets.size();
    std::vector<double> flat(n * m);
    for (std::size_t i = 0; i < m; ++i) {
        if (columns[i].size() != n) {
            throw GridMismatchError("position column " + std::to_string(i) + " has " +
                                    std::to_string(columns[i].size()) + " entries for a grid of " +
                                    std::to_string(n) + " instants");
        }
        for (std::size_t k = 0; k < n; ++k) {
            flat[k * m + i] = columns[i][k];
        }
    }
    return StrategyPath(FlatTag{}, std::move(assets), std::move(flat));
}

void StrategyPath::validate() const {
    if (assets_.empty()) {
        throw DomainError("strategy needs at least one asset");
    }
    const TimeGrid& grid = assets_.front().grid();
    for (std::size_t i = 1; i < assets_.size(); ++i) {
        if (!(assets_[i].grid() == grid)) {
            throw GridMismatchError("asset " + std::to_string(i) + " is sampled on a different grid than asset 0");
        }
    }
    if (positions_.size() != grid.size() * assets_.size()) {
        throw GridMismatchError("position matrix does not match grid size times asset count");
    }
    if (!all_finite(positions_)) {
        throw DomainError("strategy has a non-finite position");
    }
}

StrategyPath StrategyPath::without_asset(std::size_t index) const {
    if (index >= assets_.size()) {
        throw DomainError("asset index " + std::to_string(index) + " out of range for " +
                          std::to_string(assets_.size()) + " assets");
    }
    if (assets_.size() == 1) {
        throw DomainError("cannot remove the only asset of a strategy");
    }
    const std::size_t m = assets_.size();
    std::vector<AssetProcess> kept;
    kept.reserve(m - 1);
    for (std::size_t i = 0; i < m; ++i) {
        if (i != index) kept.push_back(assets_[i]);
    }
    std::vector<double> flat;
    flat.reserve(size() * (m - 1));
    for (std::size_t k = 0; k < size(); ++k) {
        for (std::size_t i = 0; i < m; ++i) {
            if (i != index) flat.push_back(position(k, i));
        }
    }
    return StrategyPath(FlatTag{}, std::move(kept), std::move(flat));
}

ResidualReport ResidualReport::from_residuals(std::vector<double> residuals, double tolerance) {
    if (!(tolerance > 0.0)) {
        throw DomainError("residual tolerance must be positive");
    }
    ResidualReport report;
    report.tolerance = tolerance;
    report.max_abs = 0.0;
    for (double r : residuals) {
        // NaN must not pass as self-financing
        if (!(std::abs(r) <= report.max_abs)) report.max_abs = std::abs(r);
    }
    report.is_self_financing = report.max_abs <= tolerance;
    report.residuals = std::move(residuals);
    return report;
}

std::vector<double> portfolio_value(const StrategyPath& strategy) {
    std::vector<double> value(strategy.size(), 0.0);
    for (std::size_t k = 0; k < strategy.size(); ++k) {
        double v = 0.0;
        for (std::size_t i = 0; i < strategy.asset_count(); ++i) {
            v += strategy.position(k, i) * strategy.asset(i).price()[k];
        }
        value[k] = v;
    }
    return value;
}

std::vector<double> portfolio_gain_increments(const StrategyPath& strategy) {
    std::vector<double> gains(strategy.size() - 1, 0.0);
    for (std::size_t k = 0; k + 1 < strategy.size(); ++k) {
        double g = 0.0;
        for (std::size_t i = 0; i < strategy.asset_count(); ++i) {
            g += strategy.position(k, i) * strategy.asset(i).gain_increment(k);
        }
        gains[k] = g;
    }
    return gains;
}

ResidualReport self_financing_residual(const StrategyPath& strategy, double tolerance) {
    if (!(tolerance > 0.0)) {
        throw DomainError("residual tolerance must be positive");
    }
    const auto value = portfolio_value(strategy);
    const auto gains = portfolio_gain_increments(strategy);
    std::vector<double> residuals(gains.size());
    for (std::size_t k = 0; k < gains.size(); ++k) {
        residuals[k] = (value[k + 1] - value[k]) - gains[k];
    }
    return ResidualReport::from_residuals(std::move(residuals), tolerance);
}

std::vector<double> leibniz_gap(const StrategyPath& strategy) {
    std::vector<double> gap(strategy.size() - 1, 0.0);
    for (std::size_t k = 0; k + 1 < strategy.size(); ++k) {
        double g = 0.0;
        for (std::size_t i = 0; i < strategy.asset_count(); ++i) {
            const double trade = strategy.position(k + 1, i) - strategy.position(k, i);
            g += strategy.asset(i).price()[k + 1] * trade;
        }
        gap[k] = g;
    }
    return gap;
}

ResidualReport bk_subportfolio_check(const StrategyPath& strategy, std::size_t cash_index, double tolerance) {
    if (cash_index >= strategy.asset_count()) {
        throw DomainError("cash index " + std::to_string(cash_index) + " out of range for " +
                          std::to_string(strategy.asset_count()) + " assets");
    }
    return self_financing_residual(strategy.without_asset(cash_index), tolerance);
}

}  // namespace selffin
