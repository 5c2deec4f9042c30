#pragma once

#include <cstddef>

#include "selffin/market.hpp"

namespace selffin {

/// European price on a Cox-Ross-Rubinstein recombining tree: u = e^{sigma
/// sqrt(dt)}, d = 1/u, risk-neutral drift r_R - r_D, discounting per step at
/// the policy's effective funding rate.
///
/// Independent of the PDE solver. Throws DomainError if `steps == 0` or the
/// step violates u > e^{(r_R - r_D) dt} > d (use more steps or lower rates).
double binomial_oracle(const MarketParams& market, const CollateralPolicy& policy, const Payoff& payoff,
                       std::size_t steps);

}  // namespace selffin
