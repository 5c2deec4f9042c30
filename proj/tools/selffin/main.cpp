#include <cstdlib>
#include <iostream>

#include <CLI11.hpp>

#include "selffin/cli/commands.hpp"

int main(int argc, char** argv) {
    using namespace selffin::cli;

    CLI::App app{"Funding-aware pricing, hedging and self-financing checks"};
    app.require_subcommand(1);

    Options opts;
    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--scenario", opts.scenario, "Scenario JSON file")->required();
        sub->add_option("--out", opts.out_dir, "Output directory")->capture_default_str();
        sub->add_option("--threads", opts.threads, "Worker threads")->check(CLI::PositiveNumber);
    };

    auto* price = app.add_subcommand("price", "Solve the funding PDE, write price.json");
    add_common(price);
    price->add_flag("--surface", opts.surface, "Also write surface.csv");

    auto* hedge = app.add_subcommand("hedge", "Simulate discrete hedging, write hedge.json");
    add_common(hedge);
    hedge->add_flag("--paths-csv", opts.paths_csv, "Also write per-path CSV");

    auto* verify = app.add_subcommand("verify", "Run the acceptance criteria");
    verify->add_option("--threads", opts.threads, "Worker threads")->check(CLI::PositiveNumber);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kOk : kSchemaError;
    }

    if (const char* seed = std::getenv("SELFFIN_SEED")) opts.seed_override = seed;

    if (*price) return run_price(opts, std::cout, std::cerr);
    if (*hedge) return run_hedge(opts, std::cout, std::cerr);
    return run_verify(opts.threads, std::cout, std::cerr);
}
