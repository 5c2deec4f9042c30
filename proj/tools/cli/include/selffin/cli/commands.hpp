#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

namespace selffin::cli {

enum ExitCode : int { kOk = 0, kCriteriaFailed = 1, kSchemaError = 2, kNumericError = 3 };

struct Options {
    std::filesystem::path scenario;
    std::filesystem::path out_dir = "out";
    unsigned threads = 1;
    bool surface = false;    ///< also write surface.csv
    bool paths_csv = false;  ///< also write paths_<mode>.csv
    /// Overrides simulation.seed when set (from SELFFIN_SEED).
    std::optional<std::string> seed_override;
};

/// Writes price.json (and surface.csv) under out_dir. Nothing is written
/// unless the scenario validates and the solve succeeds. Diagnostics go to
/// `err`.
int run_price(const Options& options, std::ostream& out, std::ostream& err);

/// Writes hedge.json (and paths_<mode>.csv per mode) under out_dir.
int run_hedge(const Options& options, std::ostream& out, std::ostream& err);

/// Runs the acceptance criteria and prints the pass/fail table to `out`.
int run_verify(unsigned threads, std::ostream& out, std::ostream& err);

}  // namespace selffin::cli
