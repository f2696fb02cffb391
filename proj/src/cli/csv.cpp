#include "tailsum/cli/csv.hpp"

#include "tailsum/format.hpp"

namespace tailsum::cli {

namespace {

std::string field(const std::optional<double>& v) { return v ? format_double(*v) : std::string(); }

} // namespace

void attach_oracle(ResultRow& row, double oracle, const std::string& kind) {
    row.oracle = oracle;
    row.oracle_kind = kind;
    if (row.estimate)
        row.rel_error = (*row.estimate - oracle) / oracle;
}

std::string csv_header() {
    return "method,severity,severity_params,frequency,frequency_params,alpha,order,estimate,"
           "oracle,oracle_kind,rel_error,ci_low,ci_high,seed,error";
}

std::string csv_line(const ResultRow& r) {
    std::string s;
    s += r.method + ',' + r.severity + ',' + r.severity_params + ',' + r.frequency + ',' +
         r.frequency_params + ',' + format_double(r.alpha) + ',';
    s += (r.order ? std::to_string(*r.order) : std::string()) + ',';
    s += field(r.estimate) + ',' + field(r.oracle) + ',' + r.oracle_kind + ',' + field(r.rel_error) +
         ',' + field(r.ci_low) + ',' + field(r.ci_high) + ',';
    s += (r.seed ? std::to_string(*r.seed) : std::string()) + ',' + r.error;
    return s;
}

void write_csv(std::ostream& out, const std::vector<ResultRow>& rows) {
    out << csv_version_line << '\n' << csv_header() << '\n';
    for (const auto& r : rows)
        out << csv_line(r) << '\n';
}

} // namespace tailsum::cli
