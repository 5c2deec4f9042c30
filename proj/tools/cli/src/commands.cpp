#include "selffin/cli/commands.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <ostream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "selffin/cli/scenario.hpp"
#include "selffin/cli/verify.hpp"
#include "selffin/errors.hpp"
#include "selffin/format.hpp"

namespace selffin::cli {
namespace {

using nlohmann::json;

// Output files are rendered in memory first and only written once every
// computation has succeeded.
struct PendingFile {
    std::string name;
    std::string contents;
};

int write_all(const std::filesystem::path& dir, const std::vector<PendingFile>& files, std::ostream& err) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) {
        err << "error: cannot create " << dir.string() << ": " << ec.message() << '\n';
        return kNumericError;
    }
    for (const auto& f : files) {
        std::ofstream out(dir / f.name, std::ios::binary | std::ios::trunc);
        out << f.contents;
        if (!out) {
            err << "error: cannot write " << (dir / f.name).string() << '\n';
            return kNumericError;
        }
    }
    return kOk;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

json number(double x) { return round_for_output(x); }

std::uint64_t parse_seed(const std::string& text) {
    std::uint64_t seed = 0;
    const auto* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, seed);
    if (ec != std::errc() || ptr != end || text.empty()) {
        throw ScenarioError("SELFFIN_SEED", "expected an unsigned 64-bit integer, got \"" + text + "\"");
    }
    return seed;
}

std::string surface_csv(const PdeSolution& sol) {
    std::string csv = "t,S,V,delta\n";
    const auto& v = sol.values();
    const auto& d = sol.deltas();
    for (std::size_t j = 0; j < v.rows; ++j) {
        for (std::size_t i = 0; i < v.cols; ++i) {
            csv += format_number(sol.times()[j]);
            csv += ',';
            csv += format_number(sol.spots()[i]);
            csv += ',';
            csv += format_number(v(j, i));
            csv += ',';
            csv += format_number(d(j, i));
            csv += '\n';
        }
    }
    return csv;
}

std::string paths_csv(const HedgeReport& r) {
    std::string csv = "path,pnl,ledger_residual_max,leakage_total\n";
    for (std::size_t p = 0; p < r.pnl.size(); ++p) {
        csv += std::to_string(p);
        csv += ',';
        csv += format_number(r.pnl[p]);
        csv += ',';
        csv += format_number(r.ledger_residual_max[p]);
        csv += ',';
        csv += format_number(r.leakage_total[p]);
        csv += '\n';
    }
    return csv;
}

json report_json(const HedgeReport& r) {
    const double residual = *std::max_element(r.ledger_residual_max.begin(), r.ledger_residual_max.end());
    const auto nonzero = std::count_if(r.leakage_total.begin(), r.leakage_total.end(), [](double x) { return x != 0.0; });
    const auto leakage = summarize(r.leakage_total);
    return {
        {"mode", std::string(to_string(r.mode))},
        {"mean_pnl", number(r.stats.mean)},
        {"std_pnl", number(r.stats.std_dev)},
        {"stderr_pnl", number(r.stats.std_error)},
        {"ledger_residual_max", number(residual)},
        {"mean_leakage_total", number(leakage.mean)},
        {"leakage_nonzero_fraction", number(static_cast<double>(nonzero) / static_cast<double>(r.pnl.size()))},
    };
}

// Scenario errors map to exit 2, anything raised while computing to exit 3.
template <class Body>
int guarded(std::ostream& err, Body&& body) {
    try {
        return body();
    } catch (const ScenarioError& e) {
        err << "error: " << e.what() << '\n';
        return kSchemaError;
    } catch (const PathDomainError& e) {
        err << "error: path " << e.path_index() << ": " << e.what() << '\n';
        return kNumericError;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kNumericError;
    }
}

}  // namespace

int run_price(const Options& options, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        const Scenario sc = load_scenario(options.scenario);
        const auto sol = solve_funding_pde(sc.market, sc.policy, sc.payoff, sc.grid);
        const double price = price_at(sol, 0.0, sc.market.spot);
        const double delta = delta_at(sol, 0.0, sc.market.spot);

        const json doc = {
            {"price", number(price)},
            {"delta_at_spot", number(delta)},
            {"effective_rate", number(effective_rate(sc.market, sc.policy))},
            {"warnings", sol.warnings()},
        };
        std::vector<PendingFile> files{{"price.json", dump(doc)}};
        if (options.surface || sc.wants(Artifact::surface)) files.push_back({"surface.csv", surface_csv(sol)});
        for (const auto& w : sol.warnings()) err << "warning: " << w << '\n';

        const int rc = write_all(options.out_dir, files, err);
        if (rc == kOk) out << "price " << format_number(price) << "  delta_at_spot " << format_number(delta) << '\n';
        return rc;
    });
}

int run_hedge(const Options& options, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        Scenario sc = load_scenario(options.scenario);
        if (!sc.simulation) throw ScenarioError("simulation", "required by the hedge command");
        auto& sim = *sc.simulation;
        if (options.seed_override) sim.spec.seed = parse_seed(*options.seed_override);

        const auto sol = solve_funding_pde(sc.market, sc.policy, sc.payoff, sc.grid);
        const auto reports = run_hedge(sol, sim.spec, sim.modes, options.threads);

        json modes = json::array();
        for (const auto& r : reports) modes.push_back(report_json(r));
        json doc = {
            {"price", number(price_at(sol, 0.0, sc.market.spot))},
            {"n_paths", sim.spec.n_paths},
            {"n_steps", sim.spec.n_steps},
            {"seed", sim.spec.seed},
            {"drift", number(sim.spec.real_world_drift())},
            {"reports", modes},
        };
        std::vector<PendingFile> files{{"hedge.json", dump(doc)}};
        if (options.paths_csv || sc.wants(Artifact::paths_csv)) {
            for (const auto& r : reports) files.push_back({"paths_" + std::string(to_string(r.mode)) + ".csv", paths_csv(r)});
        }
        for (const auto& w : sol.warnings()) err << "warning: " << w << '\n';

        const int rc = write_all(options.out_dir, files, err);
        if (rc == kOk) {
            for (const auto& r : reports) {
                out << to_string(r.mode) << "  mean " << format_number(r.stats.mean) << "  std "
                    << format_number(r.stats.std_dev) << "  stderr " << format_number(r.stats.std_error) << '\n';
            }
        }
        return rc;
    });
}

int run_verify(unsigned threads, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        const auto results = run_criteria(threads);
        print_table(out, results);
        std::string failed;
        for (const auto& r : results) {
            if (!r.passed) failed += (failed.empty() ? "" : ", ") + std::to_string(r.id);
        }
        if (failed.empty()) {
            out << "all criteria passed\n";
            return static_cast<int>(kOk);
        }
        out << "failed criteria: " << failed << '\n';
        return static_cast<int>(kCriteriaFailed);
    });
}

}  // namespace selffin::cli
