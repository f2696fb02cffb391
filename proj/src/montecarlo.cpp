#include "tailsum/montecarlo.hpp"

#include "tailsum/errors.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <random>
#include <string>
#include <thread>

namespace tailsum {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::uint64_t block_seed(std::uint64_t seed, std::uint64_t block) {
    return splitmix64(splitmix64(seed) ^ splitmix64(block + 0x632be59bd9b4e019ULL));
}

// Uniform on the open interval (0, 1).
double open_uniform(std::mt19937_64& rng) {
    return (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53;
}

class CompoundSampler {
public:
    CompoundSampler(const SeverityModel& sev, const FrequencyModel& freq) : sev_(sev) {
        if (freq.kind() == FrequencyKind::deterministic)
            fixed_n_ = static_cast<long>(freq.param1());
        else
            cdf_ = freq.cdf_table(1e-17);
    }

    double draw(std::mt19937_64& rng) const {
        long n = fixed_n_;
        if (n < 0) {
            const double u = open_uniform(rng);
            n = static_cast<long>(std::lower_bound(cdf_.begin(), cdf_.end(), u) - cdf_.begin());
        }
        double z = 0.0;
        for (long i = 0; i < n; ++i)
            z += sev_.quantile_survival(open_uniform(rng));
        return z;
    }

private:
    const SeverityModel& sev_;
    long fixed_n_ = -1;
    std::vector<double> cdf_;
};

void require_budget(double alpha, std::uint64_t n) {
    if (!(alpha > 0.0 && alpha < 1.0))
        throw DomainError("quantile level must lie in (0, 1)");
    const double tail = static_cast<double>(n) * (1.0 - alpha);
    if (tail < 100.0) {
        const auto required = static_cast<std::uint64_t>(std::ceil(100.0 / (1.0 - alpha)));
        throw InsufficientSamplesError("need n_samples * (1 - alpha) >= 100, i.e. at least " +
                                           std::to_string(required) + " samples",
                                       required);
    }
}

struct Ranks {
    std::uint64_t point, low, high; // zero-based
};

Ranks order_statistic_ranks(std::uint64_t n, double alpha) {
    const double dn = static_cast<double>(n);
    const double centre = dn * alpha;
    const double half = 1.96 * std::sqrt(dn * alpha * (1.0 - alpha));
    auto clamp_rank = [&](double r) {
        // r is a one-based rank
        const double c = std::clamp(r, 1.0, dn);
        return static_cast<std::uint64_t>(c) - 1;
    };
    return {clamp_rank(std::ceil(centre)), clamp_rank(std::floor(centre - half)),
            clamp_rank(std::ceil(centre + half))};
}

} // namespace

unsigned default_worker_count() {
    unsigned hw = std::thread::hardware_concurrency();
    if (hw == 0)
        hw = 1;
    if (const char* env = std::getenv("TAILSUM_THREADS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && v > 0)
            return static_cast<unsigned>(std::min<long>(v, 256));
    }
    return hw;
}

std::vector<double> sample_compound(const SeverityModel& sev, const FrequencyModel& freq,
                                    const MonteCarloSettings& settings) {
    const std::uint64_t n = settings.n_samples;
    std::vector<double> out(n);
    const CompoundSampler sampler(sev, freq);
    const std::uint64_t blocks = (n + mc_block_size - 1) / mc_block_size;
    const std::uint64_t chunks = std::max<std::uint64_t>(1, std::min<std::uint64_t>(settings.chunks, blocks));
    const unsigned threads = settings.threads ? settings.threads : default_worker_count();
    const unsigned workers = static_cast<unsigned>(std::min<std::uint64_t>(threads, chunks));

    // Chunk c covers a contiguous run of blocks; each block has its own stream.
    auto run_chunk = [&](std::uint64_t c) {
        const std::uint64_t b0 = blocks * c / chunks, b1 = blocks * (c + 1) / chunks;
        for (std::uint64_t b = b0; b < b1; ++b) {
            std::mt19937_64 rng(block_seed(settings.seed, b));
            const std::uint64_t i1 = std::min(n, (b + 1) * mc_block_size);
            for (std::uint64_t i = b * mc_block_size; i < i1; ++i)
                out[i] = sampler.draw(rng);
        }
    };

    if (workers <= 1) {
        for (std::uint64_t c = 0; c < chunks; ++c)
            run_chunk(c);
        return out;
    }
    std::atomic<std::uint64_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w)
        pool.emplace_back([&] {
            for (std::uint64_t c = next++; c < chunks; c = next++)
                run_chunk(c);
        });
    for (auto& t : pool)
        t.join();
    return out;
}

MonteCarloEstimate quantile_from_sorted(const std::vector<double>& sorted, double alpha) {
    require_budget(alpha, sorted.size());
    const auto r = order_statistic_ranks(sorted.size(), alpha);
    MonteCarloEstimate e;
    e.alpha = alpha;
    e.point = sorted[r.point];
    e.ci_low = sorted[r.low];
    e.ci_high = sorted[r.high];
    e.n_samples = sorted.size();
    return e;
}

MonteCarloEstimate percentile_estimate(const SeverityModel& sev, const FrequencyModel& freq,
                                       double alpha, const MonteCarloSettings& settings) {
    require_budget(alpha, settings.n_samples);
    auto z = sample_compound(sev, freq, settings);
    const auto r = order_statistic_ranks(z.size(), alpha);
    // Select the three ranks; each nth_element narrows the next search range.
    std::nth_element(z.begin(), z.begin() + static_cast<std::ptrdiff_t>(r.point), z.end());
    if (r.low < r.point)
        std::nth_element(z.begin(), z.begin() + static_cast<std::ptrdiff_t>(r.low),
                         z.begin() + static_cast<std::ptrdiff_t>(r.point));
    if (r.high > r.point)
        std::nth_element(z.begin() + static_cast<std::ptrdiff_t>(r.point) + 1,
                         z.begin() + static_cast<std::ptrdiff_t>(r.high), z.end());
    MonteCarloEstimate e;
    e.alpha = alpha;
    e.point = z[r.point];
    e.ci_low = z[r.low];
    e.ci_high = z[r.high];
    e.n_samples = settings.n_samples;
    e.seed = settings.seed;
    e.chunks = settings.chunks;
    return e;
}

std::vector<MonteCarloEstimate> percentile_estimates(const SeverityModel& sev,
                                                     const FrequencyModel& freq,
                                                     const std::vector<double>& alphas,
                                                     const MonteCarloSettings& settings) {
    for (double a : alphas)
        require_budget(a, settings.n_samples);
    auto z = sample_compound(sev, freq, settings);
    std::sort(z.begin(), z.end());
    std::vector<MonteCarloEstimate> out;
    out.reserve(alphas.size());
    for (double a : alphas) {
        auto e = quantile_from_sorted(z, a);
        e.seed = settings.seed;
        e.chunks = settings.chunks;
        out.push_back(e);
    }
    return out;
}

} // namespace tailsum
