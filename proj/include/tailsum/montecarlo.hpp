#pragma once

#include "tailsum/frequency.hpp"
#include "tailsum/severity.hpp"

#include <cstdint>
#include <vector>

namespace tailsum {

struct MonteCarloSettings {
    std::uint64_t n_samples = 1'000'000;
    std::uint64_t seed = 0;
    /// Number of work partitions. Affects scheduling only; the random streams
    /// are tied to fixed-size sample blocks, so results do not depend on it.
    unsigned chunks = 1;
    /// Worker threads; 0 means TAILSUM_THREADS or the hardware concurrency.
    unsigned threads = 0;
};

struct MonteCarloEstimate {
    double alpha = 0.0;
    double point = 0.0;
    double ci_low = 0.0;
    double ci_high = 0.0;
    std::uint64_t n_samples = 0;
    std::uint64_t seed = 0;
    unsigned chunks = 1;

    /// Half-width of the confidence interval relative to the point estimate.
    double relative_half_width() const { return 0.5 * (ci_high - ci_low) / point; }
};

/// Samples per random stream.
inline constexpr std::uint64_t mc_block_size = 65536;

/// Draws of the compound sum Z = L_1 + ... + L_N, N ~ freq, L_i ~ sev, by
/// inverse-CDF sampling. Bit-identical for fixed (seed, n_samples).
std::vector<double> sample_compound(const SeverityModel& sev, const FrequencyModel& freq,
                                    const MonteCarloSettings& settings);

/// Empirical alpha-quantile (order statistic ceil(alpha n)) with a 95%
/// order-statistic confidence interval. Requires n (1 - alpha) >= 100.
MonteCarloEstimate percentile_estimate(const SeverityModel& sev, const FrequencyModel& freq,
                                       double alpha, const MonteCarloSettings& settings);

/// Several quantile levels from one shared sample.
std::vector<MonteCarloEstimate> percentile_estimates(const SeverityModel& sev,
                                                     const FrequencyModel& freq,
                                                     const std::vector<double>& alphas,
                                                     const MonteCarloSettings& settings);

/// Order-statistic estimate on an existing sample; `sorted` must be ascending.
MonteCarloEstimate quantile_from_sorted(const std::vector<double>& sorted, double alpha);

/// Worker count from TAILSUM_THREADS, else the hardware concurrency.
unsigned default_worker_count();

} // namespace tailsum
