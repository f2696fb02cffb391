#pragma once

#include "tailsum/baselines.hpp"
#include "tailsum/frequency.hpp"
#include "tailsum/severity.hpp"

#include <cstdint>
#include <istream>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

// Run configuration: flat `key = value` lines grouped under [section]
// headers. '#' and ';' start comments. Lists are comma-separated.
//
//   [severity]  kind = levy|lognormal|pareto, c | sigma | a
//   [frequency] kind = deterministic|poisson|negbin|generic, n | lambda | p, r | pmf
//   [run]       alphas, orders, methods
//   [mc]        n_samples, seed, chunks
//   [sweep]     axis = alpha|sigma|a|lambda|order, values
//   [output]    path

namespace tailsum::cli {

class ConfigError : public std::runtime_error {
public:
    ConfigError(int line, const std::string& key, const std::string& what);
    int line() const { return line_; }
    const std::string& key() const { return key_; }
    /// The message without the line/key prefix.
    const std::string& detail() const { return detail_; }

private:
    int line_;
    std::string key_;
    std::string detail_;
};

/// A file that cannot be opened or written.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct McSpec {
    std::uint64_t n_samples = 1'000'000;
    std::uint64_t seed = 0;
    unsigned chunks = 1;
};

enum class SweepAxis { alpha, sigma, a, lambda, order };

struct SweepSpec {
    SweepAxis axis = SweepAxis::alpha;
    std::vector<double> values;
};

/// A method as requested in the config; PERT without an explicit order is
/// expanded over `orders`.
struct MethodRequest {
    MethodId id;
    bool explicit_order = false;
};

struct RunConfig {
    SeverityModel severity = SeverityModel::pareto(1.0);
    FrequencyModel frequency = FrequencyModel::deterministic(1);
    std::vector<double> alphas;
    std::vector<int> orders{3};
    std::vector<MethodRequest> methods;
    std::optional<McSpec> mc;
    std::optional<SweepSpec> sweep;
    std::string output;
};

RunConfig parse_config(std::istream& in);
/// Throws IoError when the file cannot be opened.
RunConfig load_config(const std::string& path);

std::string axis_name(SweepAxis axis);

/// Copy of `base` with the sweep axis set to `value`. Throws ConfigError
/// (line 0) when the value is invalid for the configured models.
RunConfig apply_sweep_value(const RunConfig& base, SweepAxis axis, double value);

} // namespace tailsum::cli
