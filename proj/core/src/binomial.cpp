#include "selffin/binomial.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "selffin/errors.hpp"

namespace selffin {

double binomial_oracle(const MarketParams& market, const CollateralPolicy& policy, const Payoff& payoff,
                       std::size_t steps) {
    market.validate();
    policy.validate();
    if (steps == 0) throw DomainError("binomial tree needs at least one step");

    const double dt = market.horizon / static_cast<double>(steps);
    const double up = std::exp(market.volatility * std::sqrt(dt));
    const double down = 1.0 / up;
    const double growth = std::exp(market.carry() * dt);
    if (!(up > growth && growth > down)) {
        throw DomainError("binomial step violates u > e^{(r_R - r_D) dt} > d with " + std::to_string(steps) +
                          " steps; use more steps or lower rates");
    }
    const double p_up = (growth - down) / (up - down);
    const double discount = std::exp(-effective_rate(market, policy) * dt);

    // node j at level n has price spot * u^j * d^(n-j) = spot * u^(2j - n)
    std::vector<double> values(steps + 1);
    for (std::size_t j = 0; j <= steps; ++j) {
        const double exponent = 2.0 * static_cast<double>(j) - static_cast<double>(steps);
        values[j] = payoff(market.spot * std::pow(up, exponent));
    }
    for (std::size_t n = steps; n-- > 0;) {
        for (std::size_t j = 0; j <= n; ++j) {
            values[j] = discount * (p_up * values[j + 1] + (1.0 - p_up) * values[j]);
        }
    }
    return values[0];
}

}  // namespace selffin
