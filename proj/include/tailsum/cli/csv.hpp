#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace tailsum::cli {

inline constexpr const char* csv_version_line = "# tailsum-csv v1";

struct ResultRow {
    std::string method;
    std::string severity;
    std::string severity_params;
    std::string frequency;
    std::string frequency_params;
    double alpha = 0.0;
    std::optional<int> order;
    std::optional<double> estimate;
    std::optional<double> oracle;
    std::string oracle_kind; // "exact", "mc" or empty
    std::optional<double> rel_error;
    std::optional<double> ci_low;
    std::optional<double> ci_high;
    std::optional<std::uint64_t> seed;
    std::string error;
};

/// Sets oracle fields and rel_error = (estimate - oracle) / oracle.
void attach_oracle(ResultRow& row, double oracle, const std::string& kind);

std::string csv_header();
std::string csv_line(const ResultRow& row);
void write_csv(std::ostream& out, const std::vector<ResultRow>& rows);

} // namespace tailsum::cli
