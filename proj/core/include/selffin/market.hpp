/**
 * @file market.hpp
 * @brief Market constants, collateral policy and terminal payoffs
 */

#pragma once

#include <span>
#include <string_view>
#include <utility>
#include <vector>

namespace selffin {

/// Constant-coefficient market. All rates are annualized, continuously
/// compounded and may be negative.
struct MarketParams {
    double volatility = 0.2;       ///< sigma of the risky asset
    double dividend_yield = 0.0;   ///< r_D, paid continuously on the stock
    double repo_rate = 0.0;        ///< r_R, secured funding of the stock position
    double collateral_rate = 0.0;  ///< r_C, accrual on posted collateral
    double funding_rate = 0.0;     ///< r_F, unsecured funding
    double spot = 100.0;
    double horizon = 1.0;  ///< years

    /// Risk-neutral drift of the stock under repo financing, r_R - r_D.
    double carry() const noexcept { return repo_rate - dividend_yield; }

    /// Throws DomainError unless sigma >= 0, spot > 0, horizon > 0 and all
    /// fields are finite.
    void validate() const;
};

enum class CollateralKind { none, full, fraction };

/// Collateral as a fixed fraction of the derivative value, C = gamma V.
struct CollateralPolicy {
    CollateralKind kind = CollateralKind::none;
    double gamma = 0.0;  ///< only read for `fraction`

    static CollateralPolicy none() { return {CollateralKind::none, 0.0}; }
    static CollateralPolicy full() { return {CollateralKind::full, 1.0}; }
    static CollateralPolicy fraction(double gamma) { return {CollateralKind::fraction, gamma}; }

    /// 0 for none, 1 for full, gamma for fraction.
    double collateral_fraction() const noexcept;

    /// Throws DomainError if a fraction policy has gamma outside [0, 1].
    void validate() const;
};

/// Discount rate of the linear funding PDE for C = gamma V:
/// gamma r_C + (1 - gamma) r_F, evaluated as r_F + gamma (r_C - r_F) so
/// that r_C == r_F gives r_F exactly for every policy.
double effective_rate(const MarketParams& market, const CollateralPolicy& policy);

enum class PayoffKind { call, put, custom };

std::string_view to_string(PayoffKind kind);
std::string_view to_string(CollateralKind kind);

/// European terminal payoff V(T, S).
///
/// A custom payoff is the piecewise-linear interpolant of tabulated
/// (S, value) points, extended linearly beyond both ends using the first
/// and last segments.
class Payoff {
public:
    static Payoff call(double strike);
    static Payoff put(double strike);
    /// Needs >= 2 points with strictly increasing, nonnegative abscissae.
    static Payoff custom(std::vector<std::pair<double, double>> points);

    PayoffKind kind() const noexcept { return kind_; }
    double strike() const noexcept { return strike_; }
    std::span<const std::pair<double, double>> points() const noexcept { return points_; }

    double operator()(double s) const;

    /// Asymptote slope * S + intercept of the payoff for large S.
    std::pair<double, double> upper_asymptote() const;

    /// Price scale used to size the spatial grid: the strike for vanillas,
    /// the largest abscissa for custom payoffs.
    double reference_level() const noexcept;

private:
    Payoff(PayoffKind kind, double strike, std::vector<std::pair<double, double>> points)
        : kind_(kind), strike_(strike), points_(std::move(points)) {}

    PayoffKind kind_;
    double strike_;
    std::vector<std::pair<double, double>> points_;
};

}  // namespace selffin
