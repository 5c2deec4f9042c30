#include "selffin/funding_pde.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "selffin/errors.hpp"

namespace selffin {

namespace {

/// Solves the tridiagonal system in place (Thomas algorithm); `rhs` holds
/// the solution on return. lower[0] and upper[n-1] are ignored.
void solve_tridiagonal(std::span<const double> lower, std::span<const double> diag, std::span<const double> upper,
                       std::span<double> rhs, std::vector<double>& scratch) {
    const std::size_t n = diag.size();
    scratch.resize(n);
    double pivot = diag[0];
    if (pivot == 0.0 || !std::isfinite(pivot)) throw NumericError("tridiagonal solve: singular pivot at row 0");
    scratch[0] = upper[0] / pivot;
    rhs[0] /= pivot;
    for (std::size_t i = 1; i < n; ++i) {
        pivot = diag[i] - lower[i] * scratch[i - 1];
        if (pivot == 0.0 || !std::isfinite(pivot)) {
            throw NumericError("tridiagonal solve: singular pivot at row " + std::to_string(i));
        }
        scratch[i] = i + 1 < n ? upper[i] / pivot : 0.0;
        rhs[i] = (rhs[i] - lower[i] * rhs[i - 1]) / pivot;
    }
    for (std::size_t i = n - 1; i-- > 0;) {
        rhs[i] -= scratch[i] * rhs[i + 1];
    }
}

struct Bracket {
    std::size_t lo;
    double weight;  // of the upper node
};

Bracket locate(double x, double step, std::size_t intervals) {
    const double pos = x / step;
    auto lo = static_cast<std::size_t>(std::max(0.0, std::floor(pos)));
    lo = std::min(lo, intervals - 1);
    return {lo, std::clamp(pos - static_cast<double>(lo), 0.0, 1.0)};
}

double interpolate(const PdeSolution& solution, const Surface& surface, double t, double s) {
    const double horizon = solution.market().horizon;
    const double slack = 1e-12 * std::max(1.0, horizon);
    if (!(t >= -slack && t <= horizon + slack)) {
        throw DomainError("t = " + std::to_string(t) + " outside [0, " + std::to_string(horizon) + "]");
    }
    if (!(s >= 0.0 && s <= solution.s_max() * (1.0 + 1e-12))) {
        throw DomainError("S = " + std::to_string(s) + " outside [0, " + std::to_string(solution.s_max()) +
                          "]; increase s_max_multiple");
    }
    const auto bt = locate(t, solution.dt(), surface.rows - 1);
    const auto bs = locate(s, solution.ds(), surface.cols - 1);
    const double v00 = surface(bt.lo, bs.lo);
    const double v01 = surface(bt.lo, bs.lo + 1);
    const double v10 = surface(bt.lo + 1, bs.lo);
    const double v11 = surface(bt.lo + 1, bs.lo + 1);
    const double near = v00 + bs.weight * (v01 - v00);
    const double far = v10 + bs.weight * (v11 - v10);
    return near + bt.weight * (far - near);
}

}  // namespace

void GridSpec::validate() const {
    if (s_nodes < 3) throw DomainError("grid needs s_nodes >= 3");
    if (t_steps < 1) throw DomainError("grid needs t_steps >= 1");
    if (!(s_max_multiple >= 3.0) || !std::isfinite(s_max_multiple)) {
        throw DomainError("grid needs s_max_multiple >= 3");
    }
    if (!(scheme_theta >= 0.0 && scheme_theta <= 1.0)) throw DomainError("scheme_theta must lie in [0, 1]");
}

PdeSolution::PdeSolution(MarketParams market, CollateralPolicy policy, Payoff payoff, GridSpec grid, double s_max,
                         Surface values, std::vector<std::string> warnings)
    : market_(market),
      policy_(policy),
      payoff_(std::move(payoff)),
      grid_(grid),
      s_max_(s_max),
      ds_(s_max / static_cast<double>(grid.s_nodes - 1)),
      dt_(market.horizon / static_cast<double>(grid.t_steps)),
      values_(std::move(values)),
      warnings_(std::move(warnings)) {
    times_.resize(grid_.t_steps + 1);
    for (std::size_t j = 0; j <= grid_.t_steps; ++j) {
        times_[j] = market_.horizon * static_cast<double>(j) / static_cast<double>(grid_.t_steps);
    }
    spots_.resize(grid_.s_nodes);
    for (std::size_t i = 0; i < grid_.s_nodes; ++i) {
        spots_[i] = ds_ * static_cast<double>(i);
    }
    deltas_ = delta_surface(values_, ds_);
}

PdeSolution solve_funding_pde(const MarketParams& market, const CollateralPolicy& policy, const Payoff& payoff,
                              const GridSpec& grid) {
    market.validate();
    policy.validate();
    grid.validate();

    const std::size_t n = grid.s_nodes;
    const double s_max = grid.s_max_multiple * std::max(market.spot, payoff.reference_level());
    const double ds = s_max / static_cast<double>(n - 1);
    const double spot_pos = market.spot / ds;
    if (spot_pos < 1.0 || spot_pos > static_cast<double>(n - 2)) {
        throw DomainError("grid too coarse to bracket spot: spacing " + std::to_string(ds) +
                          " with " + std::to_string(n) + " nodes; increase s_nodes");
    }

    const double sigma2 = market.volatility * market.volatility;
    const double drift = market.carry();
    const double rate = effective_rate(market, policy);
    const double dtau = market.horizon / static_cast<double>(grid.t_steps);
    const auto [slope, intercept] = payoff.upper_asymptote();
    const double value_at_zero = payoff(0.0);

    std::vector<std::string> warnings;
    const double theta = grid.scheme_theta;
    const double interior_max = static_cast<double>(n - 2);
    if (theta < 0.5 && (1.0 - 2.0 * theta) * dtau * (sigma2 * interior_max * interior_max + std::abs(rate)) > 1.0) {
        warnings.push_back("time step exceeds the explicit stability (CFL) limit; expect oscillation");
    }

    Surface values{grid.t_steps + 1, n, std::vector<double>((grid.t_steps + 1) * n)};
    for (std::size_t i = 0; i < n; ++i) {
        values(grid.t_steps, i) = payoff(ds * static_cast<double>(i));
    }

    // L V_i = a_i V_{i-1} + b_i V_i + c_i V_{i+1}, with S_i / ds = i
    const std::size_t m = n - 2;
    std::vector<double> a(m), b(m), c(m);
    for (std::size_t k = 0; k < m; ++k) {
        const double i = static_cast<double>(k + 1);
        a[k] = 0.5 * sigma2 * i * i - 0.5 * drift * i;
        b[k] = -sigma2 * i * i - rate;
        c[k] = 0.5 * sigma2 * i * i + 0.5 * drift * i;
    }

    std::vector<double> lower(m), diag(m), upper(m), rhs(m), scratch;
    for (std::size_t step = 0; step < grid.t_steps; ++step) {
        const bool startup = step < grid.rannacher_steps && theta > 0.0 && theta < 1.0;
        const double th = startup ? 1.0 : theta;
        const double tau = dtau * static_cast<double>(step + 1);
        const std::size_t from = grid.t_steps - step;
        const std::size_t to = from - 1;

        const double low_bc = value_at_zero * std::exp(-rate * tau);
        const double high_bc =
            slope * s_max * std::exp((drift - rate) * tau) + intercept * std::exp(-rate * tau);

        const auto old = values.row(from);
        for (std::size_t k = 0; k < m; ++k) {
            const std::size_t i = k + 1;
            const double explicit_part = a[k] * old[i - 1] + b[k] * old[i] + c[k] * old[i + 1];
            rhs[k] = old[i] + (1.0 - th) * dtau * explicit_part;
            lower[k] = -th * dtau * a[k];
            diag[k] = 1.0 - th * dtau * b[k];
            upper[k] = -th * dtau * c[k];
        }
        rhs.front() += th * dtau * a.front() * low_bc;
        rhs.back() += th * dtau * c.back() * high_bc;

        solve_tridiagonal(lower, diag, upper, rhs, scratch);

        values(to, 0) = low_bc;
        values(to, n - 1) = high_bc;
        for (std::size_t k = 0; k < m; ++k) {
            if (!std::isfinite(rhs[k])) throw NumericError("non-finite value in PDE step " + std::to_string(step));
            values(to, k + 1) = rhs[k];
        }
    }

    return PdeSolution(market, policy, payoff, grid, s_max, std::move(values), std::move(warnings));
}

Surface delta_surface(const Surface& values, double ds) {
    Surface deltas{values.rows, values.cols, std::vector<double>(values.data.size())};
    const std::size_t n = values.cols;
    for (std::size_t j = 0; j < values.rows; ++j) {
        deltas(j, 0) = (-3.0 * values(j, 0) + 4.0 * values(j, 1) - values(j, 2)) / (2.0 * ds);
        for (std::size_t i = 1; i + 1 < n; ++i) {
            deltas(j, i) = (values(j, i + 1) - values(j, i - 1)) / (2.0 * ds);
        }
        deltas(j, n - 1) = (3.0 * values(j, n - 1) - 4.0 * values(j, n - 2) + values(j, n - 3)) / (2.0 * ds);
    }
    return deltas;
}

Surface delta_surface(const PdeSolution& solution) { return delta_surface(solution.values(), solution.ds()); }

double price_at(const PdeSolution& solution, double t, double s) {
    return interpolate(solution, solution.values(), t, s);
}

double delta_at(const PdeSolution& solution, double t, double s) {
    return interpolate(solution, solution.deltas(), t, s);
}

}  // namespace selffin
