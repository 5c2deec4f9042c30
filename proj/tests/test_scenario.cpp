#include <gtest/gtest.h>

#include "selffin/cli/scenario.hpp"

namespace selffin::cli {
namespace {

const char* kMinimal = R"({
  "market": {"sigma": 0.2, "spot": 100, "horizon": 1},
  "policy": {"kind": "none"},
  "payoff": {"kind": "call", "strike": 100}
})";

std::string where_of(const std::string& text) {
    try {
        parse_scenario(text);
    } catch (const ScenarioError& e) {
        return e.where();
    }
    return "<accepted>";
}

std::string with(const std::string& block) {
    return R"({"market": {"sigma": 0.2, "spot": 100, "horizon": 1}, "policy": {"kind": "none"},
              "payoff": {"kind": "call", "strike": 100}, )" +
           block + "}";
}

TEST(ScenarioTest, MinimalDocumentTakesDefaults) {
    const auto s = parse_scenario(kMinimal);
    EXPECT_EQ(s.market.repo_rate, 0.0);
    EXPECT_EQ(s.market.funding_rate, 0.0);
    EXPECT_EQ(s.grid.s_nodes, 400u);
    EXPECT_EQ(s.grid.rannacher_steps, 2u);
    EXPECT_FALSE(s.simulation);
    EXPECT_TRUE(s.outputs.empty());
}

TEST(ScenarioTest, FullDocument) {
    const auto s = parse_scenario(R"({
      "market": {"sigma": 0.25, "spot": 95, "horizon": 0.5, "r_D": 0.03, "r_R": 0.02, "r_C": 0.01, "r_F": 0.04},
      "policy": {"kind": "fraction", "gamma": 0.5},
      "payoff": {"kind": "custom", "points": [[0, 0], [100, 0], [150, 50]]},
      "grid": {"s_nodes": 201, "t_steps": 100, "s_max_multiple": 4, "scheme_theta": 1, "rannacher_steps": 0},
      "simulation": {"n_paths": 10, "n_steps": 20, "seed": 18446744073709551615,
                     "mode": ["correct", "erroneous_star"], "drift": -0.1},
      "outputs": ["surface", "paths_csv"]
    })");
    EXPECT_EQ(s.market.dividend_yield, 0.03);
    EXPECT_EQ(s.policy.collateral_fraction(), 0.5);
    EXPECT_EQ(s.payoff.kind(), PayoffKind::custom);
    EXPECT_EQ(s.payoff(150), 50.0);
    EXPECT_EQ(s.grid.scheme_theta, 1.0);
    ASSERT_TRUE(s.simulation);
    EXPECT_EQ(s.simulation->spec.seed, 18446744073709551615ull);
    EXPECT_EQ(s.simulation->spec.market.spot, 95.0);
    EXPECT_EQ(*s.simulation->spec.drift, -0.1);
    ASSERT_EQ(s.simulation->modes.size(), 2u);
    EXPECT_EQ(s.simulation->modes[1], EngineMode::erroneous_star);
    EXPECT_TRUE(s.wants(Artifact::surface));
    EXPECT_TRUE(s.wants(Artifact::paths_csv));
}

TEST(ScenarioTest, SyntaxErrorsCarryLineAndColumn) {
    EXPECT_EQ(where_of("{\n  \"market\": {\n    \"sigma\": 0.2,,\n"), "line 3, column 18");
    EXPECT_EQ(where_of(""), "line 1, column 1");
}

TEST(ScenarioTest, FieldErrorsNameTheField) {
    EXPECT_EQ(where_of(R"({"policy": {"kind": "none"}})"), "market");
    EXPECT_EQ(where_of(R"({"market": {"sigma": "high", "spot": 100, "horizon": 1}})"), "market.sigma");
    EXPECT_EQ(where_of(R"({"market": {"sigma": 0.2, "spot": 100}})"), "market.horizon");
    EXPECT_EQ(where_of(R"({"market": {"sigma": 0.2, "spot": 100, "horizon": 1, "rate": 0}})"), "market.rate");
    EXPECT_EQ(where_of(R"({"market": {"sigma": -0.2, "spot": 100, "horizon": 1}})"), "market");
    EXPECT_EQ(where_of(with(R"("extra": 1)")), "extra");
    EXPECT_EQ(where_of(with(R"("grid": {"s_nodes": 2})")), "grid");
    EXPECT_EQ(where_of(with(R"("grid": {"s_nodes": 400.5})")), "grid.s_nodes");
    EXPECT_EQ(where_of(with(R"("outputs": ["plot"])")), "outputs[0]");
    EXPECT_EQ(where_of(with(R"("simulation": {"n_paths": 10, "n_steps": 5, "seed": -1, "mode": "correct"})")),
              "simulation.seed");
    EXPECT_EQ(where_of(with(R"("simulation": {"n_paths": 10, "n_steps": 5, "seed": 1, "mode": "star"})")),
              "simulation.mode");
    EXPECT_EQ(where_of(with(R"("simulation": {"n_paths": 10, "n_steps": 5, "seed": 1,
                                              "mode": ["correct", "correct"]})")),
              "simulation.mode[1]");
    EXPECT_EQ(where_of(with(R"("simulation": {"n_paths": 0, "n_steps": 5, "seed": 1, "mode": "correct"})")),
              "simulation");
}

TEST(ScenarioTest, PolicyAndPayoffShapes) {
    const auto doc = [](const std::string& policy, const std::string& payoff) {
        return R"({"market": {"sigma": 0.2, "spot": 100, "horizon": 1}, "policy": )" + policy +
               R"(, "payoff": )" + payoff + "}";
    };
    const std::string call = R"({"kind": "call", "strike": 100})";
    EXPECT_EQ(where_of(doc(R"({"kind": "fraction"})", call)), "policy.gamma");
    EXPECT_EQ(where_of(doc(R"({"kind": "fraction", "gamma": 1.5})", call)), "policy");
    EXPECT_EQ(where_of(doc(R"({"kind": "full", "gamma": 1})", call)), "policy.gamma");
    EXPECT_EQ(where_of(doc(R"({"kind": "some"})", call)), "policy.kind");
    EXPECT_EQ(where_of(doc(R"({"kind": "none"})", R"({"kind": "call"})")), "payoff.strike");
    EXPECT_EQ(where_of(doc(R"({"kind": "none"})", R"({"kind": "call", "strike": -1})")), "payoff.strike");
    EXPECT_EQ(where_of(doc(R"({"kind": "none"})", R"({"kind": "custom", "points": [[1, 0]]})")), "payoff.points");
    EXPECT_EQ(where_of(doc(R"({"kind": "none"})", R"({"kind": "custom", "points": [[1, 0, 2]]})")),
              "payoff.points[0]");
    EXPECT_EQ(where_of(doc(R"({"kind": "none"})", R"({"kind": "digital", "strike": 1})")), "payoff.kind");
}

}  // namespace
}  // namespace selffin::cli
