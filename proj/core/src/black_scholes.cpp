#include "selffin/black_scholes.hpp"

#include <cmath>
#include <numbers>

#include "selffin/errors.hpp"

namespace selffin {

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

OptionQuote black_scholes_closed_form(OptionType type, double spot, double strike, double sigma,
                                      double carry_rate, double discount_rate, double horizon) {
    if (!(horizon > 0.0)) throw DomainError("horizon must be positive");
    if (!(sigma >= 0.0)) throw DomainError("sigma must be nonnegative");
    if (!(spot > 0.0)) throw DomainError("spot must be positive");
    if (!(strike >= 0.0)) throw DomainError("strike must be nonnegative");

    const double growth = std::exp((carry_rate - discount_rate) * horizon);  // dF/dS discounted
    const double discount = std::exp(-discount_rate * horizon);
    const double forward = spot * std::exp(carry_rate * horizon);
    const bool is_call = type == OptionType::call;

    if (strike == 0.0) {
        if (is_call) return {spot * growth, growth};
        return {0.0, 0.0};
    }
    if (sigma == 0.0) {
        const double intrinsic = is_call ? forward - strike : strike - forward;
        if (intrinsic > 0.0) return {discount * intrinsic, is_call ? growth : -growth};
        return {0.0, 0.0};
    }

    const double vol_sqrt_t = sigma * std::sqrt(horizon);
    const double d1 = (std::log(spot / strike) + (carry_rate + 0.5 * sigma * sigma) * horizon) / vol_sqrt_t;
    const double d2 = d1 - vol_sqrt_t;
    if (is_call) {
        return {spot * growth * normal_cdf(d1) - strike * discount * normal_cdf(d2), growth * normal_cdf(d1)};
    }
    return {strike * discount * normal_cdf(-d2) - spot * growth * normal_cdf(-d1), -growth * normal_cdf(-d1)};
}

}  // namespace selffin
