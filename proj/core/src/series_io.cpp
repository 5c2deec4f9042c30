#include "selffin/series_io.hpp"

#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>
#include <string>
#include <string_view>

#include "selffin/errors.hpp"
#include "selffin/format.hpp"

namespace selffin {

namespace {

double parse_field(std::string_view text, std::size_t line) {
    double x = 0.0;
    const auto* first = text.data();
    const auto* last = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(first, last, x);
    if (ec != std::errc() || ptr != last || text.empty()) {
        throw DomainError("line " + std::to_string(line) + ": cannot parse number '" + std::string(text) + "'");
    }
    if (!std::isfinite(x)) {
        throw DomainError("line " + std::to_string(line) + ": non-finite value");
    }
    return x;
}

}  // namespace

void write_series_csv(std::ostream& out, const Series& series) {
    out << "t,value\n";
    for (std::size_t k = 0; k < series.size(); ++k) {
        out << format_number(series.grid()[k]) << ',' << format_number(series[k]) << '\n';
    }
}

Series read_series_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || line != "t,value") {
        throw DomainError("line 1: expected header 't,value'");
    }
    std::vector<double> times;
    std::vector<double> values;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos || line.find(',', comma + 1) != std::string::npos) {
            throw DomainError("line " + std::to_string(line_no) + ": expected exactly two fields");
        }
        const std::string_view view(line);
        times.push_back(parse_field(view.substr(0, comma), line_no));
        values.push_back(parse_field(view.substr(comma + 1), line_no));
    }
    return Series(TimeGrid(std::move(times)), std::move(values));
}

nlohmann::json to_json(const ResidualReport& report) {
    nlohmann::json residuals = nlohmann::json::array();
    for (double r : report.residuals) residuals.push_back(round_for_output(r));
    return {
        {"residuals", std::move(residuals)},
        {"max_abs", round_for_output(report.max_abs)},
        {"is_self_financing", report.is_self_financing},
        {"tolerance", report.tolerance},
    };
}

ResidualReport residual_report_from_json(const nlohmann::json& j) {
    try {
        auto report = ResidualReport::from_residuals(j.at("residuals").get<std::vector<double>>(),
                                                     j.at("tolerance").get<double>());
        if (report.is_self_financing != j.at("is_self_financing").get<bool>()) {
            throw DomainError("is_self_financing disagrees with residuals and tolerance");
        }
        return report;
    } catch (const nlohmann::json::exception& e) {
        throw DomainError(std::string("malformed residual report: ") + e.what());
    }
}

}  // namespace selffin
