#pragma once

#include <string>

namespace selffin {

/// Significant digits used for every number written to CSV or JSON.
inline constexpr int kOutputDigits = 12;

/// Formats `x` with `kOutputDigits` significant digits ("%.12g").
std::string format_number(double x);

/// Rounds `x` to `kOutputDigits` significant digits so that a shortest
/// round-trip printer (nlohmann::json) emits at most that many digits.
double round_for_output(double x);

}  // namespace selffin
