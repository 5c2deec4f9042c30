#include <gtest/gtest.h>

#include <cmath>

#include "oracles/lognormal_quadrature.hpp"
#include "selffin/black_scholes.hpp"
#include "selffin/errors.hpp"

namespace selffin {
namespace {

// Frozen from a 30-digit quadrature of the lognormal integral (mpmath).
constexpr double kCallRate5 = 10.4505835721855667;  // S=K=100, sigma=0.2, b=r=0.05, T=1
constexpr double kCallRate0 = 7.96556745540579629;  // same, b=r=0
constexpr double kDeltaRate5 = 0.636830651175619071;

TEST(BlackScholesTest, MatchesFrozenQuadratureValues) {
    const auto q5 = black_scholes_closed_form(OptionType::call, 100, 100, 0.2, 0.05, 0.05, 1.0);
    EXPECT_NEAR(q5.price, kCallRate5, 1e-12);
    EXPECT_NEAR(q5.delta, kDeltaRate5, 1e-12);
    const auto q0 = black_scholes_closed_form(OptionType::call, 100, 100, 0.2, 0.0, 0.0, 1.0);
    EXPECT_NEAR(q0.price, kCallRate0, 1e-12);
}

TEST(BlackScholesTest, QuadratureOracleReproducesFrozenValues) {
    EXPECT_NEAR(oracle::call_by_quadrature(100, 100, 0.2, 0.05, 0.05, 1.0), kCallRate5, 1e-9);
    EXPECT_NEAR(oracle::call_by_quadrature(100, 100, 0.2, 0.0, 0.0, 1.0), kCallRate0, 1e-9);
}

TEST(BlackScholesTest, AgreesWithQuadratureAcrossCarryAndDiscount) {
    struct Case {
        double s, k, sigma, b, r, t;
    };
    const Case cases[] = {
        {100, 100, 0.25, -0.01, 0.01, 1.0}, {100, 100, 0.25, -0.01, 0.04, 1.0}, {90, 100, 0.3, 0.03, 0.01, 0.5},
        {130, 100, 0.15, 0.02, -0.005, 2.0}, {70, 100, 0.4, 0.0, 0.06, 0.25},
    };
    for (const auto& c : cases) {
        const auto call = black_scholes_closed_form(OptionType::call, c.s, c.k, c.sigma, c.b, c.r, c.t);
        const auto put = black_scholes_closed_form(OptionType::put, c.s, c.k, c.sigma, c.b, c.r, c.t);
        EXPECT_NEAR(call.price, oracle::call_by_quadrature(c.s, c.k, c.sigma, c.b, c.r, c.t), 1e-9);
        EXPECT_NEAR(put.price, oracle::put_by_quadrature(c.s, c.k, c.sigma, c.b, c.r, c.t), 1e-9);
    }
    // spot-checked with mpmath as well
    EXPECT_NEAR(black_scholes_closed_form(OptionType::put, 90, 100, 0.3, 0.03, 0.01, 0.5).price,
                13.0555943744978316, 1e-11);
}

TEST(BlackScholesTest, DeltaMatchesFiniteDifference) {
    for (auto type : {OptionType::call, OptionType::put}) {
        const double h = 1e-4;
        const auto up = black_scholes_closed_form(type, 95 + h, 100, 0.25, 0.01, 0.03, 0.75);
        const auto dn = black_scholes_closed_form(type, 95 - h, 100, 0.25, 0.01, 0.03, 0.75);
        const auto mid = black_scholes_closed_form(type, 95, 100, 0.25, 0.01, 0.03, 0.75);
        EXPECT_NEAR(mid.delta, (up.price - dn.price) / (2 * h), 1e-7);
    }
}

TEST(BlackScholesTest, ZeroStrikeCallIsDiscountedForward) {
    const auto q = black_scholes_closed_form(OptionType::call, 100, 0.0, 0.2, 0.03, 0.05, 2.0);
    EXPECT_NEAR(q.price, 100 * std::exp((0.03 - 0.05) * 2.0), 1e-12);
}

TEST(BlackScholesTest, ZeroVolatilityIsDeterministicLimit) {
    const auto q = black_scholes_closed_form(OptionType::call, 120, 100, 0.0, 0.0, 0.0, 1.0);
    EXPECT_DOUBLE_EQ(q.price, 20.0);
    EXPECT_DOUBLE_EQ(q.delta, 1.0);
    const auto otm = black_scholes_closed_form(OptionType::call, 80, 100, 0.0, 0.0, 0.0, 1.0);
    EXPECT_EQ(otm.price, 0.0);
    // limit of small sigma
    const auto near = black_scholes_closed_form(OptionType::call, 120, 100, 1e-6, 0.01, 0.02, 1.0);
    const auto lim = black_scholes_closed_form(OptionType::call, 120, 100, 0.0, 0.01, 0.02, 1.0);
    EXPECT_NEAR(near.price, lim.price, 1e-9);
}

TEST(BlackScholesTest, RejectsInvalidInputs) {
    EXPECT_THROW(black_scholes_closed_form(OptionType::call, 100, 100, 0.2, 0, 0, 0.0), DomainError);
    EXPECT_THROW(black_scholes_closed_form(OptionType::call, 100, 100, -0.2, 0, 0, 1.0), DomainError);
    EXPECT_THROW(black_scholes_closed_form(OptionType::call, 0, 100, 0.2, 0, 0, 1.0), DomainError);
}

}  // namespace
}  // namespace selffin
