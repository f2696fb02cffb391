#pragma once

#include "tailsum/cli/config.hpp"
#include "tailsum/cli/csv.hpp"

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace tailsum::cli {

enum class Command { approx, sweep, mc };

/// Rows ordered by method, then alpha ascending, then order. Methods that do
/// not apply yield rows with an error code instead of an estimate.
std::vector<ResultRow> run_approx(const RunConfig& cfg);
/// approx evaluated at every grid point of cfg.sweep, rows in grid order.
std::vector<ResultRow> run_sweep(const RunConfig& cfg);
/// One Monte Carlo row per alpha. Requires cfg.mc.
std::vector<ResultRow> run_mc(const RunConfig& cfg);

/// Exact quantile of the compound sum where one is known: Levy severity with
/// deterministic N, or a single term.
std::optional<double> exact_oracle(const RunConfig& cfg, double alpha);

struct CommandOptions {
    std::string config_path;
    std::optional<std::string> out;
    std::optional<std::uint64_t> seed;
};

/// Exit status: 0 on success (including error-code rows), 2 on config
/// errors, 3 on I/O errors.
int run_command(Command cmd, const CommandOptions& opts, std::ostream& err);

} // namespace tailsum::cli
