#include "selffin/hedge_sim.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <string>
#include <thread>

#include "selffin/errors.hpp"
#include "selffin/random.hpp"

namespace selffin {

namespace {

/// Neumaier-compensated running sum.
class CompensatedSum {
public:
    void add(double x) noexcept {
        const double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x)) {
            carry_ += (sum_ - t) + x;
        } else {
            carry_ += (x - t) + sum_;
        }
        sum_ = t;
    }
    double value() const noexcept { return sum_ + carry_; }

private:
    double sum_ = 0.0;
    double carry_ = 0.0;
};

struct Marks {
    std::vector<double> value;  // claim value from the surface
    std::vector<double> delta;
};

Marks mark_path(const PdeSolution& solution, const Series& path) {
    const double horizon = solution.market().horizon;
    if (std::abs(path.grid().horizon() - horizon) > 1e-12 * std::max(1.0, horizon)) {
        throw DomainError("path horizon " + std::to_string(path.grid().horizon()) +
                          " differs from the claim horizon " + std::to_string(horizon));
    }
    Marks marks;
    marks.value.resize(path.size());
    marks.delta.resize(path.size());
    for (std::size_t k = 0; k < path.size(); ++k) {
        const double t = path.grid()[k];
        marks.value[k] = price_at(solution, t, path[k]);
        marks.delta[k] = delta_at(solution, t, path[k]);
    }
    return marks;
}

double sum_of(std::span<const double> xs) {
    CompensatedSum s;
    for (double x : xs) s.add(x);
    return s.value();
}

Replication replicate_funded(const PdeSolution& solution, const Series& path, const Marks& marks,
                             bool freeze_delta) {
    const MarketParams& m = solution.market();
    const double gamma = solution.policy().collateral_fraction();
    const TimeGrid& grid = path.grid();
    const std::size_t n = path.size();

    std::vector<double> deltas(n), collateral(n), funding(n), value(n);
    for (std::size_t k = 0; k < n; ++k) {
        deltas[k] = freeze_delta ? marks.delta[0] : marks.delta[k];
        collateral[k] = gamma * marks.value[k];
    }

    std::vector<double> repo_div(n - 1), collateral_div(n - 1), funding_div(n - 1);
    value[0] = marks.value[0];
    funding[0] = value[0] - collateral[0];
    for (std::size_t k = 0; k + 1 < n; ++k) {
        const double dt = grid.dt(k);
        const double repo_gain = path[k + 1] - path[k] + (m.dividend_yield - m.repo_rate) * path[k] * dt;
        const double collateral_gain = m.collateral_rate * collateral[k] * dt;
        const double funding_gain = m.funding_rate * funding[k] * dt;
        value[k + 1] = value[k] + deltas[k] * repo_gain + collateral_gain + funding_gain;
        // the rebalance at t_{k+1} is paid out of (or into) the funding account
        funding[k + 1] = value[k + 1] - collateral[k + 1];

        repo_div[k] = repo_gain;
        collateral_div[k] = collateral_gain - (collateral[k + 1] - collateral[k]);
        funding_div[k] = funding_gain - (funding[k + 1] - funding[k]);
    }

    std::vector<AssetProcess> assets;
    assets.push_back(make_asset(Series(grid, std::vector<double>(n, 0.0)), repo_div, "repo"));
    assets.push_back(make_asset(Series(grid, collateral), collateral_div, "collateral"));
    assets.push_back(make_asset(Series(grid, funding), funding_div, "funding"));
    StrategyPath ledger = StrategyPath::from_columns(
        std::move(assets), {deltas, std::vector<double>(n, 1.0), std::vector<double>(n, 1.0)});

    HedgeEntry entry;
    entry.pnl = value[n - 1] - solution.payoff()(path[n - 1]);
    entry.ledger_residual_max = self_financing_residual(ledger).max_abs;
    entry.leakage_total = sum_of(leibniz_gap(ledger));
    return {entry, std::move(deltas), std::move(ledger)};
}

Replication replicate_star(const PdeSolution& solution, const Series& path, const Marks& marks) {
    const TimeGrid& grid = path.grid();
    const std::size_t n = path.size();
    const auto& v = marks.value;
    const auto& deltas = marks.delta;

    // d(gamma) = dV - Delta dS
    std::vector<double> cash(n);
    cash[0] = v[0] - deltas[0] * path[0];
    for (std::size_t k = 0; k + 1 < n; ++k) {
        cash[k + 1] = cash[k] + (v[k + 1] - v[k]) - deltas[k] * (path[k + 1] - path[k]);
    }

    const std::vector<double> no_dividend(n - 1, 0.0);
    std::vector<AssetProcess> assets;
    assets.push_back(make_asset(Series(grid, std::vector<double>(path.values().begin(), path.values().end())),
                                no_dividend, "stock"));
    assets.push_back(make_asset(Series(grid, cash), no_dividend, "cash"));
    StrategyPath ledger = StrategyPath::from_columns(std::move(assets), {deltas, std::vector<double>(n, 1.0)});

    const double book = deltas[n - 1] * path[n - 1] + cash[n - 1];
    HedgeEntry entry;
    entry.pnl = book - solution.payoff()(path[n - 1]);
    entry.ledger_residual_max = self_financing_residual(ledger).max_abs;
    entry.leakage_total = book - v[n - 1];
    return {entry, deltas, std::move(ledger)};
}

}  // namespace

void PathSpec::validate() const {
    if (n_paths < 1) throw DomainError("simulation needs n_paths >= 1");
    if (n_steps < 1) throw DomainError("simulation needs n_steps >= 1");
    market.validate();
    if (drift && !std::isfinite(*drift)) throw DomainError("drift must be finite");
}

std::string_view to_string(EngineMode mode) {
    switch (mode) {
        case EngineMode::correct: return "correct";
        case EngineMode::erroneous_star: return "erroneous_star";
        case EngineMode::erroneous_constant_delta: return "erroneous_constant_delta";
    }
    return "?";
}

EngineMode parse_engine_mode(std::string_view name) {
    for (auto mode : {EngineMode::correct, EngineMode::erroneous_star, EngineMode::erroneous_constant_delta}) {
        if (name == to_string(mode)) return mode;
    }
    throw DomainError("unknown engine mode '" + std::string(name) + "'");
}

Series simulate_gbm_path(const PathSpec& spec, std::size_t path_index) {
    const MarketParams& m = spec.market;
    const CounterNormal normal(spec.seed);
    TimeGrid grid = TimeGrid::uniform(m.horizon, spec.n_steps);
    const double sigma = m.volatility;
    const double mu = spec.real_world_drift();
    std::vector<double> s(spec.n_steps + 1);
    s[0] = m.spot;
    for (std::size_t k = 0; k < spec.n_steps; ++k) {
        const double dt = grid.dt(k);
        const double z = sigma > 0.0 ? normal(path_index, k) : 0.0;
        s[k + 1] = s[k] * std::exp((mu - 0.5 * sigma * sigma) * dt + sigma * std::sqrt(dt) * z);
    }
    return Series(std::move(grid), std::move(s));
}

std::vector<Series> simulate_gbm_paths(const PathSpec& spec) {
    spec.validate();
    std::vector<Series> paths;
    paths.reserve(spec.n_paths);
    for (std::size_t p = 0; p < spec.n_paths; ++p) {
        paths.push_back(simulate_gbm_path(spec, p));
    }
    return paths;
}

Replication replicate_traced(const PdeSolution& solution, const Series& path, EngineMode mode) {
    const Marks marks = mark_path(solution, path);
    switch (mode) {
        case EngineMode::correct: return replicate_funded(solution, path, marks, false);
        case EngineMode::erroneous_constant_delta: return replicate_funded(solution, path, marks, true);
        case EngineMode::erroneous_star: return replicate_star(solution, path, marks);
    }
    throw DomainError("unknown engine mode");
}

HedgeEntry replicate(const PdeSolution& solution, const Series& path, EngineMode mode) {
    return replicate_traced(solution, path, mode).entry;
}

StrategyPath with_explicit_cash(const Replication& replication, const Series& path, const MarketParams& market) {
    const StrategyPath& ledger = replication.ledger;
    if (ledger.asset_count() != 3 || ledger.asset(0).name() != "repo") {
        throw DomainError("explicit-cash recast needs a [repo, collateral, funding] ledger");
    }
    const TimeGrid& grid = ledger.grid();
    const std::size_t n = ledger.size();
    const auto value = portfolio_value(ledger);
    const auto collateral = ledger.asset(1).price();
    const auto funding = ledger.asset(2).price();
    const auto& deltas = replication.deltas;

    std::vector<double> cash(n), stock_div(n - 1), cash_div(n - 1);
    for (std::size_t k = 0; k < n; ++k) {
        cash[k] = value[k] - deltas[k] * path[k];
    }
    for (std::size_t k = 0; k + 1 < n; ++k) {
        const double dt = grid.dt(k);
        stock_div[k] = market.dividend_yield * path[k] * dt;
        const double cash_gain = (-market.repo_rate * deltas[k] * path[k] + market.collateral_rate * collateral[k] +
                                  market.funding_rate * funding[k]) *
                                 dt;
        cash_div[k] = cash_gain - (cash[k + 1] - cash[k]);
    }
    std::vector<AssetProcess> assets;
    assets.push_back(make_asset(Series(grid, std::vector<double>(path.values().begin(), path.values().end())),
                                stock_div, "stock"));
    assets.push_back(make_asset(Series(grid, cash), cash_div, "cash"));
    return StrategyPath::from_columns(std::move(assets), {deltas, std::vector<double>(n, 1.0)});
}

PnlStats summarize(std::span<const double> xs) {
    if (xs.empty()) throw DomainError("cannot summarize an empty sample");
    CompensatedSum total;
    for (double x : xs) total.add(x);
    const double n = static_cast<double>(xs.size());
    PnlStats stats;
    stats.mean = total.value() / n;
    if (xs.size() > 1) {
        CompensatedSum squares;
        for (double x : xs) squares.add((x - stats.mean) * (x - stats.mean));
        stats.std_dev = std::sqrt(squares.value() / (n - 1.0));
        stats.std_error = stats.std_dev / std::sqrt(n);
    }
    return stats;
}

std::vector<HedgeReport> run_hedge(const PdeSolution& solution, const PathSpec& spec,
                                   std::span<const EngineMode> modes, unsigned threads) {
    spec.validate();
    if (modes.empty()) throw DomainError("no engine mode requested");
    threads = std::clamp<unsigned>(threads, 1, static_cast<unsigned>(std::min<std::size_t>(spec.n_paths, 256)));

    std::vector<HedgeReport> reports(modes.size());
    for (std::size_t i = 0; i < modes.size(); ++i) {
        reports[i].mode = modes[i];
        reports[i].n_steps = spec.n_steps;
        reports[i].pnl.resize(spec.n_paths);
        reports[i].ledger_residual_max.resize(spec.n_paths);
        reports[i].leakage_total.resize(spec.n_paths);
    }

    std::mutex failure_mutex;
    std::size_t failed_path = std::numeric_limits<std::size_t>::max();
    std::exception_ptr failure;

    auto work = [&](std::size_t begin, std::size_t end) {
        for (std::size_t p = begin; p < end; ++p) {
            try {
                const Series path = simulate_gbm_path(spec, p);
                for (std::size_t i = 0; i < modes.size(); ++i) {
                    const HedgeEntry e = replicate(solution, path, modes[i]);
                    reports[i].pnl[p] = e.pnl;
                    reports[i].ledger_residual_max[p] = e.ledger_residual_max;
                    reports[i].leakage_total[p] = e.leakage_total;
                }
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (p < failed_path) {
                    failed_path = p;
                    failure = std::current_exception();
                }
                return;
            }
        }
    };

    if (threads == 1) {
        work(0, spec.n_paths);
    } else {
        std::vector<std::jthread> workers;
        const std::size_t chunk = (spec.n_paths + threads - 1) / threads;
        for (std::size_t begin = 0; begin < spec.n_paths; begin += chunk) {
            workers.emplace_back(work, begin, std::min(begin + chunk, spec.n_paths));
        }
    }

    if (failure) {
        try {
            std::rethrow_exception(failure);
        } catch (const DomainError& e) {
            throw PathDomainError(failed_path, e.what());
        }
    }
    for (auto& report : reports) report.stats = summarize(report.pnl);
    return reports;
}

HedgeReport run_hedge(const PdeSolution& solution, const PathSpec& spec, EngineMode mode, unsigned threads) {
    const EngineMode modes[] = {mode};
    return std::move(run_hedge(solution, spec, modes, threads).front());
}

std::vector<ConvergenceRow> pnl_stats(std::span<const HedgeReport> reports) {
    if (reports.empty()) throw DomainError("pnl_stats needs at least one report");
    std::vector<ConvergenceRow> rows;
    rows.reserve(reports.size());
    for (const auto& report : reports) {
        rows.push_back({report.n_steps, report.stats, std::nullopt});
    }
    for (std::size_t i = 0; i + 1 < rows.size(); ++i) {
        if (rows[i + 1].n_steps == 2 * rows[i].n_steps && rows[i + 1].stats.std_dev > 0.0) {
            rows[i].std_ratio = rows[i].stats.std_dev / rows[i + 1].stats.std_dev;
        }
    }
    return rows;
}

}  // namespace selffin
