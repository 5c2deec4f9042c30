#pragma once

namespace selffin {

enum class OptionType { call, put };

struct OptionQuote {
    double price;
    double delta;
};

/// Lognormal closed form with drift `carry_rate` and discounting at
/// `discount_rate`. `sigma == 0` is evaluated as the deterministic limit
/// e^{-rT} max(+/-(F - K), 0) with F = S e^{bT}. Throws DomainError for
/// horizon <= 0, sigma < 0, spot <= 0 or strike < 0.
OptionQuote black_scholes_closed_form(OptionType type, double spot, double strike, double sigma,
                                      double carry_rate, double discount_rate, double horizon);

/// Standard normal CDF.
double normal_cdf(double x);

}  // namespace selffin
