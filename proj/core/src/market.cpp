#include "selffin/market.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "selffin/errors.hpp"

namespace selffin {

void MarketParams::validate() const {
    const double fields[] = {volatility, dividend_yield, repo_rate, collateral_rate, funding_rate, spot, horizon};
    for (double x : fields) {
        if (!std::isfinite(x)) throw DomainError("market parameters must be finite");
    }
    if (volatility < 0.0) throw DomainError("volatility must be nonnegative");
    if (!(spot > 0.0)) throw DomainError("spot must be positive");
    if (!(horizon > 0.0)) throw DomainError("horizon must be positive");
}

double CollateralPolicy::collateral_fraction() const noexcept {
    switch (kind) {
        case CollateralKind::none: return 0.0;
        case CollateralKind::full: return 1.0;
        case CollateralKind::fraction: return gamma;
    }
    return 0.0;
}

void CollateralPolicy::validate() const {
    if (kind == CollateralKind::fraction && !(gamma >= 0.0 && gamma <= 1.0)) {
        throw DomainError("collateral fraction gamma must lie in [0, 1]");
    }
}

double effective_rate(const MarketParams& market, const CollateralPolicy& policy) {
    return market.funding_rate + policy.collateral_fraction() * (market.collateral_rate - market.funding_rate);
}

std::string_view to_string(PayoffKind kind) {
    switch (kind) {
        case PayoffKind::call: return "call";
        case PayoffKind::put: return "put";
        case PayoffKind::custom: return "custom";
    }
    return "?";
}

std::string_view to_string(CollateralKind kind) {
    switch (kind) {
        case CollateralKind::none: return "none";
        case CollateralKind::full: return "full";
        case CollateralKind::fraction: return "fraction";
    }
    return "?";
}

Payoff Payoff::call(double strike) {
    if (!(strike >= 0.0) || !std::isfinite(strike)) throw DomainError("strike must be finite and nonnegative");
    return Payoff(PayoffKind::call, strike, {});
}

Payoff Payoff::put(double strike) {
    if (!(strike >= 0.0) || !std::isfinite(strike)) throw DomainError("strike must be finite and nonnegative");
    return Payoff(PayoffKind::put, strike, {});
}

Payoff Payoff::custom(std::vector<std::pair<double, double>> points) {
    if (points.size() < 2) throw DomainError("custom payoff needs at least 2 points");
    for (std::size_t i = 0; i < points.size(); ++i) {
        const auto [s, v] = points[i];
        if (!std::isfinite(s) || !std::isfinite(v)) throw DomainError("custom payoff points must be finite");
        if (s < 0.0) throw DomainError("custom payoff abscissae must be nonnegative");
        if (i > 0 && !(s > points[i - 1].first)) {
            throw DomainError("custom payoff abscissae must be strictly increasing (point " + std::to_string(i) + ")");
        }
    }
    return Payoff(PayoffKind::custom, 0.0, std::move(points));
}

double Payoff::operator()(double s) const {
    switch (kind_) {
        case PayoffKind::call: return std::max(s - strike_, 0.0);
        case PayoffKind::put: return std::max(strike_ - s, 0.0);
        case PayoffKind::custom: break;
    }
    // segment containing s, clamped to the first/last segment for extrapolation
    auto it = std::upper_bound(points_.begin(), points_.end(), s,
                               [](double x, const auto& p) { return x < p.first; });
    std::size_t hi = static_cast<std::size_t>(it - points_.begin());
    hi = std::clamp<std::size_t>(hi, 1, points_.size() - 1);
    const auto [s0, v0] = points_[hi - 1];
    const auto [s1, v1] = points_[hi];
    return v0 + (v1 - v0) * (s - s0) / (s1 - s0);
}

std::pair<double, double> Payoff::upper_asymptote() const {
    switch (kind_) {
        case PayoffKind::call: return {1.0, -strike_};
        case PayoffKind::put: return {0.0, 0.0};
        case PayoffKind::custom: break;
    }
    const auto [s0, v0] = points_[points_.size() - 2];
    const auto [s1, v1] = points_.back();
    const double slope = (v1 - v0) / (s1 - s0);
    return {slope, v1 - slope * s1};
}

double Payoff::reference_level() const noexcept {
    return kind_ == PayoffKind::custom ? points_.back().first : strike_;
}

}  // namespace selffin
