#include "selffin/cli/verify.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ostream>

#include "selffin/binomial.hpp"
#include "selffin/black_scholes.hpp"
#include "selffin/funding_pde.hpp"
#include "selffin/hedge_sim.hpp"

namespace selffin::cli {
namespace {

using Clock = std::chrono::steady_clock;

std::string fmt(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", x);
    return buf;
}

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

// r_C = r_F = r_R = 0.05, r_D = 0, sigma = 0.2, S = 100, T = 1
MarketParams all_rates_equal() {
    MarketParams m;
    m.volatility = 0.2;
    m.repo_rate = m.collateral_rate = m.funding_rate = 0.05;
    m.spot = 100.0;
    m.horizon = 1.0;
    return m;
}

MarketParams desk() {
    MarketParams m;
    m.volatility = 0.25;
    m.dividend_yield = 0.03;
    m.repo_rate = 0.02;
    m.collateral_rate = 0.01;
    m.funding_rate = 0.04;
    m.spot = 100.0;
    m.horizon = 1.0;
    return m;
}

PathSpec paths(const MarketParams& m, std::size_t n_paths, std::size_t n_steps) {
    PathSpec spec;
    spec.market = m;
    spec.n_paths = n_paths;
    spec.n_steps = n_steps;
    spec.seed = kVerifySeed;
    return spec;
}

double bs_call_reference() {
    return black_scholes_closed_form(OptionType::call, 100, 100, 0.2, 0.05, 0.05, 1.0).price;
}

double pde_call_price(const GridSpec& grid) {
    const auto sol = solve_funding_pde(all_rates_equal(), CollateralPolicy::none(), Payoff::call(100), grid);
    return price_at(sol, 0.0, 100.0);
}

double spot_price(const MarketParams& m, const CollateralPolicy& p, const Payoff& payoff) {
    return price_at(solve_funding_pde(m, p, payoff), 0.0, m.spot);
}

const std::array<CollateralPolicy, 3> kPolicies{CollateralPolicy::none(), CollateralPolicy::fraction(0.5),
                                                CollateralPolicy::full()};

}  // namespace

CriterionResult bs_collapse() {
    const auto start = Clock::now();
    const double pde = pde_call_price(GridSpec{});
    const double elapsed = seconds_since(start);
    const double exact = bs_call_reference();
    const double rel = std::abs(pde / exact - 1.0);
    return {1, "Black-Scholes collapse", rel < 1e-3 && elapsed < 1.0,
            "pde " + fmt(pde) + " closed form " + fmt(exact) + " rel " + fmt(rel) +
                (elapsed < 1.0 ? "" : " (solve exceeded 1 s)")};
}

CriterionResult oracle_equivalence() {
    const auto m = desk();
    double worst = 0.0;
    for (const auto& policy : kPolicies) {
        for (const auto& payoff : {Payoff::call(100), Payoff::put(100)}) {
            const double pde = spot_price(m, policy, payoff);
            const double tree = binomial_oracle(m, policy, payoff, 2000);
            worst = std::max(worst, std::abs(pde / tree - 1.0));
        }
    }
    return {2, "Oracle equivalence", worst < 1e-3, "max rel diff over 6 scenarios " + fmt(worst)};
}

CriterionResult collateral_invariance() {
    auto equal = desk();
    equal.collateral_rate = equal.funding_rate = 0.03;
    double spread = 0.0;
    for (const auto& payoff : {Payoff::call(100), Payoff::put(100)}) {
        double lo = INFINITY, hi = -INFINITY;
        for (const auto& policy : kPolicies) {
            const double v = spot_price(equal, policy, payoff);
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
        spread = std::max(spread, hi - lo);
    }
    const auto m = desk();
    bool ordered = true;
    double margin = INFINITY;
    for (const auto& payoff : {Payoff::call(100), Payoff::put(100)}) {
        const double full = spot_price(m, CollateralPolicy::full(), payoff);
        const double none = spot_price(m, CollateralPolicy::none(), payoff);
        ordered = ordered && full > none;
        margin = std::min(margin, full - none);
    }
    return {3, "Collateral invariance", spread < 1e-8 && ordered,
            "spread at r_C = r_F " + fmt(spread) + ", min full - none " + fmt(margin)};
}

CriterionResult ledger_exactness(unsigned threads) {
    const auto m = desk();
    const auto sol = solve_funding_pde(m, CollateralPolicy::fraction(0.5), Payoff::call(100));
    const auto report = run_hedge(sol, paths(m, 1000, 250), EngineMode::correct, threads);
    const double worst = *std::max_element(report.ledger_residual_max.begin(), report.ledger_residual_max.end());
    return {4, "Ledger exactness", worst <= 1e-10, "max residual over 1000 paths " + fmt(worst)};
}

CriterionResult subportfolio_contradiction() {
    const auto m = desk();
    const auto sol = solve_funding_pde(m, CollateralPolicy::fraction(0.5), Payoff::call(100));
    const auto spec = paths(m, 1000, 250);
    std::size_t rebalanced = 0, flagged = 0;
    double full_worst = 0.0;
    for (std::size_t p = 0; p < spec.n_paths; ++p) {
        const auto path = simulate_gbm_path(spec, p);
        const auto rep = replicate_traced(sol, path, EngineMode::correct);
        const auto book = with_explicit_cash(rep, path, m);
        full_worst = std::max(full_worst, self_financing_residual(book).max_abs);
        const bool moved = std::adjacent_find(rep.deltas.begin(), rep.deltas.end(), std::not_equal_to<>()) !=
                           rep.deltas.end();
        if (!moved) continue;
        ++rebalanced;
        if (bk_subportfolio_check(book, kExplicitCashIndex).max_abs > 0.0) ++flagged;
    }
    return {5, "Subportfolio contradiction", flagged == rebalanced && rebalanced > 0 && full_worst <= 1e-10,
            "subportfolio flagged on " + std::to_string(flagged) + "/" + std::to_string(rebalanced) +
                " rebalanced paths, full residual " + fmt(full_worst)};
}

CriterionResult leibniz_gap_identity(unsigned threads) {
    const auto m = desk();
    const auto sol = solve_funding_pde(m, CollateralPolicy::fraction(0.5), Payoff::call(100));
    const auto spec = paths(m, 1000, 250);
    double worst = 0.0;
    std::size_t nonzero = 0;
    for (std::size_t p = 0; p < spec.n_paths; ++p) {
        const auto path = simulate_gbm_path(spec, p);
        const auto entry = replicate(sol, path, EngineMode::erroneous_star);
        // hedge ratios re-read from the surface, independent of the engine
        double gap = 0.0;
        double prev = delta_at(sol, path.grid()[0], path[0]);
        for (std::size_t k = 0; k + 1 < path.size(); ++k) {
            const double next = delta_at(sol, path.grid()[k + 1], path[k + 1]);
            gap += path[k + 1] * (next - prev);
            prev = next;
        }
        worst = std::max(worst, std::abs(entry.leakage_total - gap));
        if (entry.leakage_total != 0.0) ++nonzero;
    }

    const auto frozen = [&](std::size_t n) {
        return run_hedge(sol, paths(m, 10000, n), EngineMode::erroneous_constant_delta, threads).stats.std_dev;
    };
    const double ratio = frozen(125) / frozen(250);
    const bool pass = worst <= 1e-10 && nonzero * 100 > 99 * spec.n_paths && ratio >= 0.9 && ratio <= 1.2;
    return {6, "Leibniz-gap identity", pass,
            "max |leakage - sum S dDelta| " + fmt(worst) + ", nonzero leakage " + std::to_string(nonzero) + "/" +
                std::to_string(spec.n_paths) + ", frozen-delta std(125)/std(250) " + fmt(ratio)};
}

namespace {

struct MeanTest {
    bool passed = true;
    std::string detail;
    std::vector<double> std_devs;
};

// |mean pnl| < 3 stderr at n_steps 50, 100, 200 for one drift.
MeanTest mean_pnl_test(const PdeSolution& sol, std::optional<double> drift, unsigned threads) {
    MeanTest t;
    for (std::size_t n : {50u, 100u, 200u}) {
        auto spec = paths(sol.market(), 10000, n);
        spec.drift = drift;
        const auto r = run_hedge(sol, spec, EngineMode::correct, threads);
        const double z = r.stats.mean / r.stats.std_error;
        t.passed = t.passed && std::abs(z) < 3.0;
        t.std_devs.push_back(r.stats.std_dev);
        t.detail += (t.detail.empty() ? "" : " ") + ("n=" + std::to_string(n) + ":" + fmt(z));
    }
    return t;
}

}  // namespace

CriterionResult replication_convergence(unsigned threads) {
    const auto start = Clock::now();
    const auto sol = solve_funding_pde(all_rates_equal(), CollateralPolicy::none(), Payoff::call(100));
    const auto t = mean_pnl_test(sol, std::nullopt, threads);
    const double ratio = t.std_devs[0] / t.std_devs[2];
    const double elapsed = seconds_since(start);
    const bool pass = t.passed && ratio >= 1.7 && ratio <= 2.3 && elapsed < 60.0;
    return {7, "Replication convergence", pass,
            "mean/stderr " + t.detail + ", std(50)/std(200) " + fmt(ratio) +
                (elapsed < 60.0 ? "" : " (exceeded 60 s)")};
}

CriterionResult drift_independence(unsigned threads) {
    const auto sol = solve_funding_pde(all_rates_equal(), CollateralPolicy::none(), Payoff::call(100));
    bool pass = true;
    std::string detail;
    for (double mu : {-0.1, 0.0, 0.2}) {
        const auto t = mean_pnl_test(sol, mu, threads);
        pass = pass && t.passed;
        detail += (detail.empty() ? "" : "; ") + ("mu=" + fmt(mu) + " mean/stderr " + t.detail);
    }
    return {8, "Drift independence", pass, detail};
}

CriterionResult grid_convergence() {
    const double exact = bs_call_reference();
    GridSpec fine;
    fine.s_nodes = 800;
    fine.t_steps = 800;
    const double coarse_err = std::abs(pde_call_price(GridSpec{}) - exact);
    const double fine_err = std::abs(pde_call_price(fine) - exact);
    const double ratio = coarse_err / fine_err;
    return {9, "Grid convergence", ratio >= 3.0 && ratio <= 5.0,
            "error 400x400 " + fmt(coarse_err) + ", 800x800 " + fmt(fine_err) + ", ratio " + fmt(ratio)};
}

std::vector<CriterionResult> run_criteria(unsigned threads) {
    return {bs_collapse(),
            oracle_equivalence(),
            collateral_invariance(),
            ledger_exactness(threads),
            subportfolio_contradiction(),
            leibniz_gap_identity(threads),
            replication_convergence(threads),
            drift_independence(threads),
            grid_convergence()};
}

void print_table(std::ostream& out, std::span<const CriterionResult> results) {
    for (const auto& r : results) {
        out << (r.passed ? "[PASS] " : "[FAIL] ") << r.id << "  " << r.title << "  " << r.detail << '\n';
    }
}

}  // namespace selffin::cli
