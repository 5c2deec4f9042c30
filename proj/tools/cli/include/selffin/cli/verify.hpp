#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace selffin::cli {

struct CriterionResult {
    int id = 0;
    std::string title;
    bool passed = false;
    std::string detail;  ///< measured quantities; never timings
};

/// Fixed seed shared by every simulated criterion.
inline constexpr std::uint64_t kVerifySeed = 12345;

CriterionResult bs_collapse();
CriterionResult oracle_equivalence();
CriterionResult collateral_invariance();
CriterionResult ledger_exactness(unsigned threads);
CriterionResult subportfolio_contradiction();
CriterionResult leibniz_gap_identity(unsigned threads);
CriterionResult replication_convergence(unsigned threads);
CriterionResult drift_independence(unsigned threads);
CriterionResult grid_convergence();

/// Criteria 1-9 in order.
std::vector<CriterionResult> run_criteria(unsigned threads);

/// One line per criterion: "[PASS] 3  title  detail".
void print_table(std::ostream& out, std::span<const CriterionResult> results);

}  // namespace selffin::cli
