#include "selffin/format.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>

namespace selffin {

std::string format_number(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.*g", kOutputDigits, x);
    return buf;
}

double round_for_output(double x) {
    if (!std::isfinite(x) || x == 0.0) return x;
    return std::strtod(format_number(x).c_str(), nullptr);
}

}  // namespace selffin
