#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include "selffin/errors.hpp"
#include "selffin/ledger.hpp"

namespace selffin {
namespace {

TimeGrid grid_of(std::size_t points, double dt = 1.0) { return TimeGrid::uniform(dt * (points - 1), points - 1); }

AssetProcess asset(std::vector<double> price, std::vector<double> increments, double dt = 1.0) {
    const auto n = price.size();
    return make_asset(Series(grid_of(n, dt), std::move(price)), increments);
}

// ---------------------------------------------------------------------------
// TimeGrid / Series
// ---------------------------------------------------------------------------

TEST(TimeGridTest, RejectsInvalidInstants) {
    EXPECT_THROW(TimeGrid({0.0}), DomainError);
    EXPECT_THROW(TimeGrid({0.5, 1.0}), DomainError);
    EXPECT_THROW(TimeGrid({0.0, 1.0, 1.0}), DomainError);
    EXPECT_THROW(TimeGrid({0.0, std::numeric_limits<double>::infinity()}), DomainError);
    EXPECT_NO_THROW(TimeGrid({0.0, 0.25, 1.0}));
}

TEST(TimeGridTest, UniformEndsExactlyAtHorizon) {
    const auto g = TimeGrid::uniform(1.0, 250);
    EXPECT_EQ(g.size(), 251u);
    EXPECT_EQ(g[0], 0.0);
    EXPECT_EQ(g.horizon(), 1.0);
}

TEST(SeriesTest, LengthMismatchIsGridMismatch) {
    EXPECT_THROW(Series(grid_of(3), {1.0, 2.0}), GridMismatchError);
}

// ---------------------------------------------------------------------------
// make_asset
// ---------------------------------------------------------------------------

TEST(MakeAssetTest, AccumulatesDividendIncrements) {
    const auto a = asset({100.0, 100.0}, {2.0});
    EXPECT_EQ(std::vector<double>(a.dividend().begin(), a.dividend().end()), (std::vector<double>{0.0, 2.0}));
    EXPECT_EQ(std::vector<double>(a.gain().begin(), a.gain().end()), (std::vector<double>{100.0, 102.0}));
}

TEST(MakeAssetTest, ZeroDividendAssetHasGainEqualToPrice) {
    const auto a = asset({100.0, 110.0}, {0.0});
    EXPECT_EQ(std::vector<double>(a.gain().begin(), a.gain().end()), (std::vector<double>{100.0, 110.0}));
    EXPECT_EQ(a.dividend()[1], 0.0);
}

TEST(MakeAssetTest, RepoAssetCarriesFinancingInItsDividend) {
    // price 0, dividend dS + (r_D - r_R) S dt with S = [100, 100], dt = 1
    const double r_d = 0.03, r_r = 0.01;
    const double increment = (100.0 - 100.0) + (r_d - r_r) * 100.0 * 1.0;
    const auto repo = asset({0.0, 0.0}, {increment});
    EXPECT_NEAR(repo.dividend()[1], 2.0, 1e-12);
    EXPECT_NEAR(repo.gain()[1], 2.0, 1e-12);
    EXPECT_EQ(repo.price()[1], 0.0);
}

TEST(MakeAssetTest, Errors) {
    EXPECT_THROW(asset({1.0, 2.0, 3.0}, {0.0}), GridMismatchError);
    EXPECT_THROW(asset({1.0, std::nan("")}, {0.0}), DomainError);
    EXPECT_THROW(asset({1.0, 2.0}, {std::numeric_limits<double>::infinity()}), DomainError);
}

// ---------------------------------------------------------------------------
// StrategyPath and portfolio operations
// ---------------------------------------------------------------------------

TEST(StrategyPathTest, ShapeErrors) {
    auto a = asset({1.0, 2.0}, {0.0});
    auto b = asset({1.0, 2.0, 3.0}, {0.0, 0.0});
    EXPECT_THROW(StrategyPath({a}, {{1.0}}), GridMismatchError);
    EXPECT_THROW(StrategyPath({a}, {{1.0}, {1.0, 2.0}}), GridMismatchError);
    EXPECT_THROW(StrategyPath({a, b}, {{1.0, 1.0}, {1.0, 1.0}}), GridMismatchError);
    EXPECT_THROW(StrategyPath({}, {}), DomainError);
}

TEST(PortfolioValueTest, FundingIdentityAccounts) {
    // theta = (Delta, 1, 1) on prices (0, C, alpha) is worth C + alpha
    const auto repo = asset({0.0, 0.0}, {1.5});
    const auto collateral = asset({40.0, 41.0}, {0.0});
    const auto funding = asset({-12.0, -9.0}, {0.0});
    const StrategyPath s({repo, collateral, funding}, {{0.6, 1.0, 1.0}, {0.7, 1.0, 1.0}});
    const auto v = portfolio_value(s);
    EXPECT_DOUBLE_EQ(v[0], 28.0);
    EXPECT_DOUBLE_EQ(v[1], 32.0);
}

TEST(PortfolioValueTest, EmptyPositionAndLinearCombination) {
    const auto a = asset({10.0, 20.0}, {0.0});
    EXPECT_EQ(portfolio_value(StrategyPath({a}, {{0.0}, {0.0}})), (std::vector<double>{0.0, 0.0}));

    const auto x = asset({10.0, 10.0}, {0.0});
    const auto y = asset({5.0, 5.0}, {0.0});
    EXPECT_EQ(portfolio_value(StrategyPath({x, y}, {{2.0, -1.0}, {2.0, -1.0}}))[0], 15.0);
}

TEST(GainIncrementsTest, UnitAndDroppedPositions) {
    // G = [0, 2, 5] as a zero-price asset with dividend increments [2, 3]
    const auto g = asset({0.0, 0.0, 0.0}, {2.0, 3.0});
    EXPECT_EQ(portfolio_gain_increments(StrategyPath({g}, {{1.0}, {1.0}, {1.0}})), (std::vector<double>{2.0, 3.0}));

    const auto h = asset({0.0, 0.0, 0.0}, {3.0, 4.0});
    EXPECT_EQ(portfolio_gain_increments(StrategyPath({h}, {{2.0}, {0.0}, {0.0}})), (std::vector<double>{6.0, 0.0}));
}

TEST(GainIncrementsTest, FundedStrategyGainPerStep) {
    const double r_d = 0.01, r_r = 0.02, r_c = 0.015, r_f = 0.04, dt = 0.5;
    const double s0 = 100.0, s1 = 104.0, c0 = 10.0, c1 = 11.0, a0 = 3.0, a1 = 2.5, delta = 0.55;
    const auto repo = asset({0.0, 0.0}, {(s1 - s0) + (r_d - r_r) * s0 * dt}, dt);
    const auto coll = asset({c0, c1}, {r_c * c0 * dt - (c1 - c0)}, dt);
    const auto fund = asset({a0, a1}, {r_f * a0 * dt - (a1 - a0)}, dt);
    const StrategyPath s({repo, coll, fund}, {{delta, 1.0, 1.0}, {delta, 1.0, 1.0}});
    const double expected = delta * ((s1 - s0) + (r_d - r_r) * s0 * dt) + r_c * c0 * dt + r_f * a0 * dt;
    EXPECT_NEAR(portfolio_gain_increments(s)[0], expected, 1e-13);
}

// ---------------------------------------------------------------------------
// self_financing_residual / leibniz_gap / bk_subportfolio_check
// ---------------------------------------------------------------------------

TEST(SelfFinancingResidualTest, BuyAndHoldIsExactlySelfFinancing) {
    const auto a = asset({50.0, 53.0, 49.0}, {0.0, 0.0});
    const auto b = asset({7.0, 7.5, 8.0}, {0.0, 0.0});
    const auto r = self_financing_residual(StrategyPath({a, b}, {{3.0, -2.0}, {3.0, -2.0}, {3.0, -2.0}}));
    EXPECT_EQ(r.max_abs, 0.0);
    EXPECT_TRUE(r.is_self_financing);
}

TEST(SelfFinancingResidualTest, UnfundedPurchaseLeavesResidual) {
    const auto a = asset({50.0, 50.0}, {0.0});
    const auto r = self_financing_residual(StrategyPath({a}, {{0.0}, {1.0}}));
    ASSERT_EQ(r.residuals.size(), 1u);
    EXPECT_EQ(r.residuals[0], 50.0);
    EXPECT_EQ(r.max_abs, 50.0);
    EXPECT_FALSE(r.is_self_financing);
}

TEST(SelfFinancingResidualTest, NonPositiveToleranceIsDomainError) {
    const auto a = asset({50.0, 50.0}, {0.0});
    const StrategyPath s({a}, {{1.0}, {1.0}});
    EXPECT_THROW(self_financing_residual(s, 0.0), DomainError);
    EXPECT_THROW(self_financing_residual(s, -1e-10), DomainError);
}

TEST(LeibnizGapTest, Examples) {
    const auto a = asset({50.0, 60.0}, {0.0});
    EXPECT_EQ(leibniz_gap(StrategyPath({a}, {{0.0}, {1.0}})), (std::vector<double>{60.0}));
    EXPECT_EQ(leibniz_gap(StrategyPath({a}, {{0.7}, {0.7}})), (std::vector<double>{0.0}));
}

TEST(BkSubportfolioTest, ConstantPositionsHaveZeroResidual) {
    const auto stock = asset({50.0, 52.0}, {0.0});
    const auto bond_b = asset({0.9, 0.91}, {0.0});
    const auto bond_c = asset({0.95, 0.96}, {0.0});
    const auto cash = asset({10.0, 10.0}, {0.1});
    const StrategyPath s({stock, bond_b, bond_c, cash}, {{1.0, 2.0, 3.0, 1.0}, {1.0, 2.0, 3.0, 1.0}});
    EXPECT_NEAR(bk_subportfolio_check(s, 3).max_abs, 0.0, 1e-13);
}

TEST(BkSubportfolioTest, RebalancedStockExposesCashExcludedCondition) {
    // stock bought 0 -> 1 at 50, paid from cash: the whole book is
    // self-financing, the cash-excluded subportfolio is not
    const auto stock = asset({50.0, 50.0}, {0.0});
    const auto bond_b = asset({0.9, 0.9}, {0.0});
    const auto bond_c = asset({0.95, 0.95}, {0.0});
    const auto cash = asset({1.0, 1.0}, {0.0});
    const StrategyPath s({stock, bond_b, bond_c, cash}, {{0.0, 1.0, 1.0, 100.0}, {1.0, 1.0, 1.0, 50.0}});
    EXPECT_TRUE(self_financing_residual(s).is_self_financing);
    const auto sub = bk_subportfolio_check(s, 3);
    EXPECT_EQ(sub.max_abs, 50.0);
    EXPECT_FALSE(sub.is_self_financing);
}

TEST(BkSubportfolioTest, CashIndexOutOfRange) {
    const auto a = asset({1.0, 1.0}, {0.0});
    const auto b = asset({1.0, 1.0}, {0.0});
    EXPECT_THROW(bk_subportfolio_check(StrategyPath({a, b}, {{1.0, 1.0}, {1.0, 1.0}}), 2), DomainError);
}

// ---------------------------------------------------------------------------
// Properties over random strategies
// ---------------------------------------------------------------------------

StrategyPath random_strategy(std::mt19937_64& rng, bool zero_dividends, bool constant_positions) {
    std::uniform_int_distribution<std::size_t> n_assets(1, 5), n_points(2, 30);
    std::uniform_real_distribution<double> price(-50.0, 200.0), div(-3.0, 3.0), pos(-10.0, 10.0);
    const std::size_t m = n_assets(rng), n = n_points(rng);
    std::vector<double> times(n);
    std::uniform_real_distribution<double> step(1e-3, 0.5);
    for (std::size_t k = 1; k < n; ++k) times[k] = times[k - 1] + step(rng);
    const TimeGrid grid(times);

    std::vector<AssetProcess> assets;
    for (std::size_t i = 0; i < m; ++i) {
        std::vector<double> p(n), d(n - 1);
        for (auto& x : p) x = price(rng);
        for (auto& x : d) x = zero_dividends ? 0.0 : div(rng);
        assets.push_back(make_asset(Series(grid, p), d));
    }
    std::vector<std::vector<double>> rows(n, std::vector<double>(m));
    for (std::size_t i = 0; i < m; ++i) {
        const double first = pos(rng);
        for (std::size_t k = 0; k < n; ++k) rows[k][i] = constant_positions ? first : pos(rng);
    }
    return StrategyPath(std::move(assets), rows);
}

class LedgerPropertyTest : public ::testing::Test {
protected:
    std::mt19937_64 rng{20240611};
    static constexpr int kCases = 300;
};

TEST_F(LedgerPropertyTest, BookkeepingIdentityHoldsExactly) {
    for (int c = 0; c < kCases; ++c) {
        const auto s = random_strategy(rng, false, false);
        for (const auto& a : s.assets()) {
            EXPECT_EQ(a.dividend()[0], 0.0);
            for (std::size_t k = 0; k < a.grid().size(); ++k) {
                ASSERT_EQ(a.gain()[k], a.price()[k] + a.dividend()[k]);
            }
        }
    }
}

TEST_F(LedgerPropertyTest, DiscreteLeibnizIdentity) {
    for (int c = 0; c < kCases; ++c) {
        const auto s = random_strategy(rng, false, false);
        const auto v = portfolio_value(s);
        const auto gap = leibniz_gap(s);
        for (std::size_t k = 0; k + 1 < s.size(); ++k) {
            double held = 0.0;
            double scale = 1.0;
            for (std::size_t i = 0; i < s.asset_count(); ++i) {
                held += s.position(k, i) * s.asset(i).price_increment(k);
                scale += std::abs(s.position(k, i) * s.asset(i).price()[k]) +
                         std::abs(s.position(k + 1, i) * s.asset(i).price()[k + 1]);
            }
            ASSERT_NEAR(v[k + 1] - v[k], held + gap[k], 1e-14 * scale);
        }
    }
}

TEST_F(LedgerPropertyTest, ResidualIsGapMinusHeldDividends) {
    for (int c = 0; c < kCases; ++c) {
        const auto s = random_strategy(rng, false, false);
        const auto r = self_financing_residual(s);
        const auto gap = leibniz_gap(s);
        for (std::size_t k = 0; k + 1 < s.size(); ++k) {
            double held_div = 0.0;
            double scale = 1.0;
            for (std::size_t i = 0; i < s.asset_count(); ++i) {
                held_div += s.position(k, i) * s.asset(i).dividend_increment(k);
                scale += std::abs(s.position(k, i)) * (std::abs(s.asset(i).gain()[k]) +
                                                       std::abs(s.asset(i).gain()[k + 1])) +
                         std::abs(s.position(k + 1, i) * s.asset(i).price()[k + 1]);
            }
            ASSERT_NEAR(r.residuals[k], gap[k] - held_div, 1e-14 * scale);
        }
    }
}

TEST_F(LedgerPropertyTest, ConstantZeroDividendStrategiesAreSelfFinancing) {
    for (int c = 0; c < kCases; ++c) {
        const auto s = random_strategy(rng, true, true);
        const auto r = self_financing_residual(s);
        EXPECT_TRUE(r.is_self_financing);
        EXPECT_LE(r.max_abs, 1e-11);
        for (double g : leibniz_gap(s)) ASSERT_EQ(g, 0.0);
    }
}

TEST_F(LedgerPropertyTest, SubportfolioResidualNonzeroAfterAnyStockRebalance) {
    // one rebalanced nonzero-price risky asset, funded by a cash account
    std::uniform_real_distribution<double> price(1.0, 200.0), pos(-10.0, 10.0);
    std::uniform_int_distribution<std::size_t> n_points(2, 20);
    for (int c = 0; c < kCases; ++c) {
        const std::size_t n = n_points(rng);
        const TimeGrid grid = TimeGrid::uniform(1.0, n - 1);
        std::vector<double> p(n), theta(n), cash(n);
        for (auto& x : p) x = price(rng);
        for (auto& x : theta) x = pos(rng);
        theta[1] = theta[0] + 1.0;  // at least one trade
        cash[0] = 100.0;
        for (std::size_t k = 1; k < n; ++k) cash[k] = cash[k - 1] - p[k] * (theta[k] - theta[k - 1]);
        const auto stock = make_asset(Series(grid, p), std::vector<double>(n - 1, 0.0));
        const auto account = make_asset(Series(grid, std::vector<double>(n, 1.0)), std::vector<double>(n - 1, 0.0));
        const auto s = StrategyPath::from_columns({stock, account}, {theta, cash});
        EXPECT_LE(self_financing_residual(s).max_abs, 1e-10);
        EXPECT_GT(bk_subportfolio_check(s, 1).max_abs, 0.0);
    }
}

}  // namespace
}  // namespace selffin
