#include "support.hpp"
#include "tailsum/errors.hpp"
#include "tailsum/levy.hpp"
#include "tailsum/montecarlo.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

using namespace tailsum;

namespace {

MonteCarloSettings settings(std::uint64_t n, std::uint64_t seed, unsigned chunks = 1, unsigned threads = 0) {
    MonteCarloSettings s;
    s.n_samples = n;
    s.seed = seed;
    s.chunks = chunks;
    s.threads = threads;
    return s;
}

// Two-sample Kolmogorov-Smirnov statistic.
double ks_two_sample(std::vector<double> a, std::vector<double> b) {
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    std::size_t i = 0, j = 0;
    double d = 0.0;
    while (i < a.size() && j < b.size()) {
        const double x = std::min(a[i], b[j]);
        while (i < a.size() && a[i] <= x)
            ++i;
        while (j < b.size() && b[j] <= x)
            ++j;
        d = std::max(d, std::fabs(double(i) / a.size() - double(j) / b.size()));
    }
    return d;
}

} // namespace

TEST_CASE("a single term reproduces the severity distribution") {
    const auto par = SeverityModel::pareto(2.0);
    auto z = sample_compound(par, FrequencyModel::deterministic(1), settings(100000, 3));
    std::sort(z.begin(), z.end());
    double d = 0.0;
    const double n = static_cast<double>(z.size());
    for (std::size_t i = 0; i < z.size(); ++i) {
        const double F = par.cdf(z[i]);
        d = std::max({d, std::fabs(F - i / n), std::fabs(F - (i + 1) / n)});
    }
    CHECK(d < 1.63 / std::sqrt(n)); // 1% critical value
    CHECK(z.front() >= 1.0);
}

TEST_CASE("an empty sum is zero") {
    const auto z = sample_compound(SeverityModel::pareto(2.0), FrequencyModel::generic({1.0}),
                                   settings(10000, 1));
    CHECK(std::all_of(z.begin(), z.end(), [](double v) { return v == 0.0; }));
}

TEST_CASE("sums of Levy terms are Levy with scale n^2 c") {
    const int n = 100;
    auto sums = sample_compound(SeverityModel::levy(1.0), FrequencyModel::deterministic(n),
                                settings(100000, 11));
    for (auto& v : sums)
        v /= double(n) * n;
    const auto single = sample_compound(SeverityModel::levy(1.0), FrequencyModel::deterministic(1),
                                        settings(100000, 12));
    const double m = 100000.0;
    CHECK(ks_two_sample(sums, single) < 1.63 * std::sqrt(2.0 / m));
}

TEST_CASE("results depend only on seed and sample count") {
    const auto sev = SeverityModel::lognormal(2.0);
    const auto freq = FrequencyModel::poisson(10);
    const auto base = sample_compound(sev, freq, settings(200000, 42, 1, 1));
    CHECK(sample_compound(sev, freq, settings(200000, 42, 1, 1)) == base);
    CHECK(sample_compound(sev, freq, settings(200000, 42, 8, 1)) == base);
    CHECK(sample_compound(sev, freq, settings(200000, 42, 8, 4)) == base);
    CHECK(sample_compound(sev, freq, settings(200000, 42, 3, 2)) == base);
    CHECK(sample_compound(sev, freq, settings(200000, 43, 1, 1)) != base);
    // A longer run extends the shorter one.
    const auto longer = sample_compound(sev, freq, settings(300000, 42, 5, 3));
    CHECK(std::equal(base.begin(), base.end(), longer.begin()));
}

TEST_CASE("order-statistic estimate and interval") {
    const auto sev = SeverityModel::pareto(1.5);
    const auto freq = FrequencyModel::poisson(5);
    const auto s = settings(1000000, 5, 4);
    const double alpha = 0.999;
    const auto e = percentile_estimate(sev, freq, alpha, s);
    auto z = sample_compound(sev, freq, s);
    std::sort(z.begin(), z.end());
    const double n = 1e6;
    const double half = 1.96 * std::sqrt(n * alpha * (1 - alpha));
    CHECK(e.point == z[static_cast<std::size_t>(std::ceil(n * alpha)) - 1]);
    CHECK(e.ci_low == z[static_cast<std::size_t>(std::floor(n * alpha - half)) - 1]);
    CHECK(e.ci_high == z[static_cast<std::size_t>(std::ceil(n * alpha + half)) - 1]);
    CHECK(e.ci_low <= e.point);
    CHECK(e.point <= e.ci_high);
    CHECK(e.n_samples == 1000000);
    CHECK(e.seed == 5);

    const auto many = percentile_estimates(sev, freq, {0.99, alpha}, s);
    CHECK(many[1].point == e.point);
    CHECK(many[1].ci_low == e.ci_low);
    CHECK(many[1].ci_high == e.ci_high);
    CHECK(many[0].point < many[1].point);
}

TEST_CASE("sample budget is enforced") {
    try {
        percentile_estimate(SeverityModel::pareto(2.0), FrequencyModel::poisson(10), 0.999,
                            settings(10000, 1));
        FAIL("expected an exception");
    } catch (const InsufficientSamplesError& e) {
        CHECK(e.required() == 100000);
        CHECK(e.code() == "insufficient_samples");
    }
}

TEST_CASE("intervals cover exact quantiles") {
    const auto par = FrequencyModel::deterministic(1);
    const auto e = percentile_estimate(SeverityModel::pareto(2.0), par, 0.99, settings(1000000, 2024));
    CHECK(e.ci_low <= 10.0);
    CHECK(10.0 <= e.ci_high);

    const double exact = levy::exact_quantile({1.0, 100}, 0.999);
    CHECK(exact == doctest::Approx(6.3662e9).epsilon(1e-4));
    const auto l = percentile_estimate(SeverityModel::levy(1.0), FrequencyModel::deterministic(100), 0.999,
                                       settings(400000, 77));
    CHECK(l.ci_low <= exact);
    CHECK(exact <= l.ci_high);
}
