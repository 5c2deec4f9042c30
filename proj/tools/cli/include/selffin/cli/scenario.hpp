#pragma once

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "selffin/funding_pde.hpp"
#include "selffin/hedge_sim.hpp"
#include "selffin/market.hpp"

namespace selffin::cli {

/// Schema violation in a scenario file. `where` is "line L, column C" for
/// syntax errors and a dotted field path (e.g. "market.sigma") otherwise.
class ScenarioError : public std::runtime_error {
public:
    ScenarioError(std::string where, const std::string& message)
        : std::runtime_error(where + ": " + message), where_(std::move(where)) {}

    const std::string& where() const noexcept { return where_; }

private:
    std::string where_;
};

enum class Artifact { surface, paths_csv };

struct Simulation {
    PathSpec spec;  ///< spec.market is a copy of Scenario::market
    std::vector<EngineMode> modes;
};

struct Scenario {
    MarketParams market;
    CollateralPolicy policy;
    Payoff payoff = Payoff::call(100.0);
    GridSpec grid;
    std::optional<Simulation> simulation;
    std::vector<Artifact> outputs;

    bool wants(Artifact a) const;
};

/// Parses and validates a scenario document. Unknown keys are errors.
///
///   market:     sigma, spot, horizon (required); r_D, r_R, r_C, r_F (default 0)
///   policy:     kind = none | full | fraction; gamma for fraction
///   payoff:     kind = call | put with strike, or custom with points [[S, V], ...]
///   grid:       s_nodes, t_steps, s_max_multiple, scheme_theta, rannacher_steps
///   simulation: n_paths, n_steps, seed, mode (name or list), drift
///   outputs:    list of "surface", "paths_csv"
///
/// Throws ScenarioError.
Scenario parse_scenario(std::string_view text);
Scenario load_scenario(const std::filesystem::path& file);

}  // namespace selffin::cli
