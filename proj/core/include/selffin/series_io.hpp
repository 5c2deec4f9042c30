#pragma once

#include <iosfwd>

#include <nlohmann/json.hpp>

#include "selffin/ledger.hpp"

namespace selffin {

/// Writes `t,value` CSV (header row, LF line endings, 12 significant digits).
void write_series_csv(std::ostream& out, const Series& series);

/// Parses `t,value` CSV. Throws DomainError on a bad header, a malformed
/// row (message carries the 1-based line number) or an invalid time grid.
Series read_series_csv(std::istream& in);

/// {"residuals": [...], "max_abs": x, "is_self_financing": b, "tolerance": tol}
nlohmann::json to_json(const ResidualReport& report);

/// Inverse of `to_json`; `max_abs` and the flag are recomputed from the
/// residuals and checked against the stored fields.
ResidualReport residual_report_from_json(const nlohmann::json& j);

}  // namespace selffin
