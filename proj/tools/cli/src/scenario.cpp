#include "selffin/cli/scenario.hpp"

#include <algorithm>
#include <fstream>
#include <initializer_list>
#include <regex>
#include <sstream>

#include <nlohmann/json.hpp>

#include "selffin/errors.hpp"

namespace selffin::cli {
namespace {

using nlohmann::json;

std::string join(const std::string& parent, std::string_view key) {
    return parent.empty() ? std::string(key) : parent + "." + std::string(key);
}

void require_object(const json& j, const std::string& where) {
    if (!j.is_object()) throw ScenarioError(where, "expected an object");
}

void reject_unknown(const json& j, const std::string& where, std::initializer_list<std::string_view> known) {
    for (const auto& [key, value] : j.items()) {
        if (std::find(known.begin(), known.end(), key) == known.end()) {
            throw ScenarioError(join(where, key), "unknown field");
        }
    }
}

double number(const json& j, const std::string& where) {
    if (!j.is_number()) throw ScenarioError(where, "expected a number");
    return j.get<double>();
}

std::uint64_t unsigned_integer(const json& j, const std::string& where) {
    if (!j.is_number_unsigned()) throw ScenarioError(where, "expected a nonnegative integer");
    return j.get<std::uint64_t>();
}

std::string string(const json& j, const std::string& where) {
    if (!j.is_string()) throw ScenarioError(where, "expected a string");
    return j.get<std::string>();
}

const json& required(const json& parent, const std::string& where, const char* key) {
    if (!parent.contains(key)) throw ScenarioError(join(where, key), "missing required field");
    return parent.at(key);
}

// Runs a module validator and reports its DomainError against `where`.
template <class F>
void validated(const std::string& where, F&& check) {
    try {
        check();
    } catch (const DomainError& e) {
        throw ScenarioError(where, e.what());
    }
}

MarketParams parse_market(const json& j) {
    const std::string w = "market";
    require_object(j, w);
    reject_unknown(j, w, {"sigma", "spot", "horizon", "r_D", "r_R", "r_C", "r_F"});
    MarketParams m;
    m.volatility = number(required(j, w, "sigma"), "market.sigma");
    m.spot = number(required(j, w, "spot"), "market.spot");
    m.horizon = number(required(j, w, "horizon"), "market.horizon");
    m.dividend_yield = j.contains("r_D") ? number(j["r_D"], "market.r_D") : 0.0;
    m.repo_rate = j.contains("r_R") ? number(j["r_R"], "market.r_R") : 0.0;
    m.collateral_rate = j.contains("r_C") ? number(j["r_C"], "market.r_C") : 0.0;
    m.funding_rate = j.contains("r_F") ? number(j["r_F"], "market.r_F") : 0.0;
    validated(w, [&] { m.validate(); });
    return m;
}

CollateralPolicy parse_policy(const json& j) {
    const std::string w = "policy";
    require_object(j, w);
    reject_unknown(j, w, {"kind", "gamma"});
    const auto kind = string(required(j, w, "kind"), "policy.kind");
    CollateralPolicy p;
    if (kind == "fraction") {
        p = CollateralPolicy::fraction(number(required(j, w, "gamma"), "policy.gamma"));
    } else if (j.contains("gamma")) {
        throw ScenarioError("policy.gamma", "only allowed with kind \"fraction\"");
    } else if (kind == "none") {
        p = CollateralPolicy::none();
    } else if (kind == "full") {
        p = CollateralPolicy::full();
    } else {
        throw ScenarioError("policy.kind", "expected \"none\", \"full\" or \"fraction\"");
    }
    validated(w, [&] { p.validate(); });
    return p;
}

Payoff parse_payoff(const json& j) {
    const std::string w = "payoff";
    require_object(j, w);
    reject_unknown(j, w, {"kind", "strike", "points"});
    const auto kind = string(required(j, w, "kind"), "payoff.kind");
    if (kind == "call" || kind == "put") {
        if (j.contains("points")) throw ScenarioError("payoff.points", "only allowed with kind \"custom\"");
        const double k = number(required(j, w, "strike"), "payoff.strike");
        Payoff p = Payoff::call(0.0);
        validated("payoff.strike", [&] { p = kind == "call" ? Payoff::call(k) : Payoff::put(k); });
        return p;
    }
    if (kind != "custom") throw ScenarioError("payoff.kind", "expected \"call\", \"put\" or \"custom\"");
    if (j.contains("strike")) throw ScenarioError("payoff.strike", "not allowed with kind \"custom\"");
    const json& pts = required(j, w, "points");
    if (!pts.is_array()) throw ScenarioError("payoff.points", "expected an array of [S, V] pairs");
    std::vector<std::pair<double, double>> points;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        const std::string pw = "payoff.points[" + std::to_string(i) + "]";
        if (!pts[i].is_array() || pts[i].size() != 2) throw ScenarioError(pw, "expected [S, V]");
        points.emplace_back(number(pts[i][0], pw), number(pts[i][1], pw));
    }
    Payoff p = Payoff::call(0.0);
    validated("payoff.points", [&] { p = Payoff::custom(std::move(points)); });
    return p;
}

GridSpec parse_grid(const json& j) {
    const std::string w = "grid";
    require_object(j, w);
    reject_unknown(j, w, {"s_nodes", "t_steps", "s_max_multiple", "scheme_theta", "rannacher_steps"});
    GridSpec g;
    if (j.contains("s_nodes")) g.s_nodes = unsigned_integer(j["s_nodes"], "grid.s_nodes");
    if (j.contains("t_steps")) g.t_steps = unsigned_integer(j["t_steps"], "grid.t_steps");
    if (j.contains("s_max_multiple")) g.s_max_multiple = number(j["s_max_multiple"], "grid.s_max_multiple");
    if (j.contains("scheme_theta")) g.scheme_theta = number(j["scheme_theta"], "grid.scheme_theta");
    if (j.contains("rannacher_steps")) g.rannacher_steps = unsigned_integer(j["rannacher_steps"], "grid.rannacher_steps");
    validated(w, [&] { g.validate(); });
    return g;
}

EngineMode parse_mode(const json& j, const std::string& where) {
    const auto name = string(j, where);
    try {
        return parse_engine_mode(name);
    } catch (const DomainError&) {
        throw ScenarioError(where, "expected \"correct\", \"erroneous_star\" or \"erroneous_constant_delta\"");
    }
}

Simulation parse_simulation(const json& j, const MarketParams& market) {
    const std::string w = "simulation";
    require_object(j, w);
    reject_unknown(j, w, {"n_paths", "n_steps", "seed", "mode", "drift"});
    Simulation sim;
    sim.spec.market = market;
    sim.spec.n_paths = unsigned_integer(required(j, w, "n_paths"), "simulation.n_paths");
    sim.spec.n_steps = unsigned_integer(required(j, w, "n_steps"), "simulation.n_steps");
    sim.spec.seed = unsigned_integer(required(j, w, "seed"), "simulation.seed");
    if (j.contains("drift")) sim.spec.drift = number(j["drift"], "simulation.drift");

    const json& mode = required(j, w, "mode");
    if (mode.is_array()) {
        if (mode.empty()) throw ScenarioError("simulation.mode", "expected at least one mode");
        for (std::size_t i = 0; i < mode.size(); ++i) {
            const auto m = parse_mode(mode[i], "simulation.mode[" + std::to_string(i) + "]");
            if (std::find(sim.modes.begin(), sim.modes.end(), m) != sim.modes.end()) {
                throw ScenarioError("simulation.mode[" + std::to_string(i) + "]", "duplicate mode");
            }
            sim.modes.push_back(m);
        }
    } else {
        sim.modes.push_back(parse_mode(mode, "simulation.mode"));
    }
    validated(w, [&] { sim.spec.validate(); });
    return sim;
}

std::vector<Artifact> parse_outputs(const json& j) {
    if (!j.is_array()) throw ScenarioError("outputs", "expected an array");
    std::vector<Artifact> out;
    for (std::size_t i = 0; i < j.size(); ++i) {
        const std::string w = "outputs[" + std::to_string(i) + "]";
        const auto name = string(j[i], w);
        if (name == "surface") {
            out.push_back(Artifact::surface);
        } else if (name == "paths_csv") {
            out.push_back(Artifact::paths_csv);
        } else {
            throw ScenarioError(w, "expected \"surface\" or \"paths_csv\"");
        }
    }
    return out;
}

// nlohmann reports "... at line L, column C: ..."; keep the position as the
// diagnostic location.
std::string syntax_location(const std::string& message) {
    static const std::regex position(R"(line (\d+), column (\d+))");
    std::smatch m;
    if (std::regex_search(message, m, position)) return m.str(0);
    return "document";
}

}  // namespace

bool Scenario::wants(Artifact a) const { return std::find(outputs.begin(), outputs.end(), a) != outputs.end(); }

Scenario parse_scenario(std::string_view text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ScenarioError(syntax_location(e.what()), "malformed JSON");
    }
    require_object(doc, "document");
    reject_unknown(doc, "", {"market", "policy", "payoff", "grid", "simulation", "outputs"});

    Scenario s;
    s.market = parse_market(required(doc, "", "market"));
    s.policy = parse_policy(required(doc, "", "policy"));
    s.payoff = parse_payoff(required(doc, "", "payoff"));
    if (doc.contains("grid")) s.grid = parse_grid(doc["grid"]);
    if (doc.contains("simulation")) s.simulation = parse_simulation(doc["simulation"], s.market);
    if (doc.contains("outputs")) s.outputs = parse_outputs(doc["outputs"]);
    return s;
}

Scenario load_scenario(const std::filesystem::path& file) {
    std::ifstream in(file, std::ios::binary);
    if (!in) throw ScenarioError(file.string(), "cannot open scenario file");
    std::ostringstream text;
    text << in.rdbuf();
    return parse_scenario(text.str());
}

}  // namespace selffin::cli
