#include "formal_series.hpp"
#include "support.hpp"
#include "tailsum/errors.hpp"
#include "tailsum/explicit_terms.hpp"
#include "tailsum/perturbative.hpp"

#include <doctest.h>

#include <cmath>
#include <vector>

using namespace tailsum;
using testsupport::rel;

namespace {

EngineOptions unguarded() {
    EngineOptions o;
    o.divergence_guard = false;
    return o;
}

PerturbativeSeries run(const SeverityModel& sev, const FrequencyModel& freq, double alpha, int K) {
    if (freq.kind() == FrequencyKind::deterministic)
        return terms_deterministic(sev, static_cast<int>(freq.param1()), alpha, K, unguarded());
    return terms_random(sev, freq, alpha, K, unguarded());
}

} // namespace

TEST_CASE("Q0 for a deterministic count") {
    const auto par = SeverityModel::pareto(2.0);
    CHECK(q0_deterministic(par, 1, 0.99) == doctest::Approx(10.0).epsilon(1e-14));
    CHECK(rel(q0_deterministic(par, 10, 0.99), std::pow(1.0 - std::pow(0.99, 0.1), -0.5)) <= 1e-13);
    CHECK(q0_deterministic(par, 10, 0.99) == doctest::Approx(31.551).epsilon(1e-4));
}

TEST_CASE("Q0 for a random count") {
    const auto par = SeverityModel::pareto(2.0);
    const double q = q0_random(par, FrequencyModel::poisson(100), 0.999);
    CHECK(q == doctest::Approx(316.148).epsilon(1e-5));
    // F^-1(log(alpha) / lambda + 1)
    CHECK(rel(q, std::pow(-std::log(0.999) / 100, -0.5)) <= 1e-12);
    for (double a : {0.9, 0.99, 0.999})
        CHECK(q0_random(par, FrequencyModel::deterministic(7), a) == q0_deterministic(par, 7, a));
}

TEST_CASE("a single term has no corrections") {
    for (const auto& sev : {SeverityModel::pareto(2.0), SeverityModel::lognormal(1.5)}) {
        const auto s = terms_deterministic(sev, 1, 0.99, 6);
        for (int k = 1; k <= 6; ++k)
            CHECK(s.coeffs[k] == 0.0);
        CHECK(s.value() == s.q0);
    }
}

TEST_CASE("first-order term for Pareto a = 2, n = 10") {
    const auto par = SeverityModel::pareto(2.0);
    const auto s = terms_deterministic(par, 10, 0.99, 1);
    const double q0 = s.q0;
    const double mu1 = testsupport::integrate([](double t) { return t * 2.0 / (t * t * t); }, 1.0, q0) /
                       (1.0 - 1.0 / (q0 * q0));
    CHECK(rel(s.coeffs[1], 9.0 * mu1) <= 1e-12);
    CHECK(s.coeffs[1] == doctest::Approx(17.447).epsilon(1e-4));
}

TEST_CASE("series bookkeeping") {
    const auto s = terms_random(SeverityModel::lognormal(2.0), FrequencyModel::poisson(100), 0.999, 5);
    CHECK(s.order == 5);
    CHECK(s.partials[0] == s.q0);
    CHECK(s.coeffs[0] == s.q0);
    double fact = 1.0;
    for (int k = 1; k <= 5; ++k) {
        fact *= k;
        CHECK(rel(s.partials[k] - s.partials[k - 1], s.coeffs[k] / fact) <= 1e-12);
        CHECK(rel(s.ratios[k], std::fabs(s.coeffs[k] / fact) / std::fabs(s.partials[k - 1])) <= 1e-12);
    }
    const auto zero = terms_random(SeverityModel::lognormal(2.0), FrequencyModel::poisson(100), 0.999, 0);
    CHECK(zero.value() == zero.q0);
    CHECK_THROWS_AS(terms_deterministic(SeverityModel::pareto(2.0), 10, 0.99, max_order + 1), DomainError);
    CHECK_THROWS_AS(terms_deterministic(SeverityModel::pareto(2.0), 10, 1.0, 2), DomainError);
}

TEST_CASE("workspace exposes the intermediate tables") {
    EngineWorkspace ws;
    EngineOptions o;
    o.workspace = &ws;
    const auto s = terms_random(SeverityModel::pareto(1.2), FrequencyModel::poisson(100), 0.999, 4, o);
    CHECK(ws.omega.size() >= 5);
    CHECK(!ws.phi.empty());
    CHECK(!ws.xi_table.empty());
    // omega^(k)_{0,0} carries Q_k.
    for (int k = 2; k <= 4; ++k)
        CHECK(ws.omega[k][0][0] == s.coeffs[k]);
}

TEST_CASE("explicit low-order forms, deterministic count") {
    for (const auto& sev : {SeverityModel::levy(1.0), SeverityModel::lognormal(2.0),
                            SeverityModel::pareto(0.8), SeverityModel::pareto(2.5)}) {
        for (int n : {2, 10, 100}) {
            for (double a : {0.95, 0.999}) {
                const auto s = terms_deterministic(sev, n, a, 2);
                const auto e = explicit_deterministic(sev, n, a);
                CHECK(rel(s.q0, e.q0) <= 1e-14);
                CHECK(rel(s.coeffs[1], e.q1) <= 1e-10);
                CHECK(rel(s.coeffs[2], e.q2) <= 1e-9);
            }
        }
    }
}

TEST_CASE("explicit low-order forms, random count") {
    const std::vector<FrequencyModel> freqs{FrequencyModel::poisson(100),
                                            FrequencyModel::negative_binomial(0.5, 100),
                                            FrequencyModel::generic({0.05, 0.25, 0.4, 0.2, 0.1})};
    for (const auto& sev : {SeverityModel::levy(1.0), SeverityModel::lognormal(2.5),
                            SeverityModel::pareto(1.2)}) {
        for (const auto& freq : freqs) {
            const auto s = terms_random(sev, freq, 0.999, 3);
            const auto e = explicit_random(sev, freq, 0.999);
            CHECK(rel(s.coeffs[1], e.q1) <= 1e-10);
            CHECK(rel(s.coeffs[2], e.q2) <= 1e-9);
            CHECK(rel(s.coeffs[3], *e.q3) <= 1e-9);
        }
    }
}

TEST_CASE("closed forms for Poisson and negative binomial counts") {
    for (const auto& sev : {SeverityModel::lognormal(2.0), SeverityModel::pareto(2.0)}) {
        const double a = 0.999;
        const auto sp = terms_random(sev, FrequencyModel::poisson(100), a, 2);
        const auto ep = explicit_poisson(sev, 100, a);
        CHECK(rel(sp.q0, ep.q0) <= 1e-12);
        CHECK(rel(sp.coeffs[1], ep.q1) <= 1e-10);
        CHECK(rel(sp.coeffs[2], ep.q2) <= 1e-9);
        const double mu1 = sev.censored_moments(sp.q0, 1).mu[1];
        CHECK(rel(sp.coeffs[1], (100 + std::log(a)) * mu1) <= 1e-10);

        const auto sn = terms_random(sev, FrequencyModel::negative_binomial(0.5, 100), a, 2);
        const auto en = explicit_negative_binomial(sev, 0.5, 100, a);
        CHECK(rel(sn.coeffs[1], en.q1) <= 1e-10);
        CHECK(rel(sn.coeffs[2], en.q2) <= 1e-9);
        const double mun = sev.censored_moments(sn.q0, 1).mu[1];
        CHECK(rel(sn.coeffs[1], 101 * (std::pow(a, 0.01) / 0.5 - 1) * mun) <= 1e-10);
    }
}

TEST_CASE("second-order term as a derivative of lambda-weighted cumulants") {
    const auto sev = SeverityModel::lognormal(2.0);
    const auto freq = FrequencyModel::poisson(100);
    const auto s = terms_random(sev, freq, 0.99, 2);
    auto inner = [&](double x) {
        const auto lam = freq.lambda_values(sev, x, 2);
        const auto mu = sev.censored_moments(x, 2);
        const double k1 = mu.mu[1], k2 = mu.mu[2] - k1 * k1;
        return lam[1] * k2 + (lam[2] - lam[1] * lam[1] / lam[0]) * k1 * k1;
    };
    const double l0 = freq.lambda_a(sev, s.q0, 0);
    const double fd = -testsupport::diff5(inner, s.q0, 1e-4 * s.q0) / l0;
    CHECK(rel(s.coeffs[2], fd) <= 1e-8);
}

TEST_CASE("deterministic count through the random-count engine") {
    for (const auto& sev : {SeverityModel::lognormal(2.0), SeverityModel::pareto(1.2)}) {
        const auto d = terms_deterministic(sev, 10, 0.99, 5);
        const auto r = terms_random(sev, FrequencyModel::deterministic(10), 0.99, 5);
        for (int k = 0; k <= 5; ++k)
            CHECK(rel(r.coeffs[k], d.coeffs[k]) <= 1e-11);
    }
}

TEST_CASE("all orders against the formal distribution expansion") {
    struct Case {
        SeverityModel sev;
        FrequencyModel freq;
        double alpha;
    };
    const std::vector<Case> cases{
        {SeverityModel::lognormal(2.5), FrequencyModel::deterministic(100), 0.95},
        {SeverityModel::pareto(2.5), FrequencyModel::deterministic(10), 0.99},
        {SeverityModel::levy(1.0), FrequencyModel::deterministic(10), 0.99},
        {SeverityModel::lognormal(2.0), FrequencyModel::poisson(20), 0.99},
        {SeverityModel::pareto(1.2), FrequencyModel::negative_binomial(0.5, 10), 0.99},
        {SeverityModel::pareto(0.8), FrequencyModel::generic({0.1, 0.3, 0.3, 0.2, 0.1}), 0.99},
    };
    const int K = 8;
    for (const auto& c : cases) {
        const auto s = run(c.sev, c.freq, c.alpha, K);
        const auto q = testsupport::formal_coefficients(c.sev, testsupport::pmf_vector(c.freq), s.q0, K);
        for (int k = 1; k <= K; ++k) {
            INFO(c.sev.params(), " ", c.freq.params(), " k=", k);
            CHECK(rel(s.coeffs[k], q[k]) <= (k <= 4 ? 1e-11 : 1e-8));
        }
    }
}

TEST_CASE("divergence guard") {
    // Light tail, low level: the first correction dwarfs Q0.
    const auto sev = SeverityModel::lognormal(0.5);
    CHECK_THROWS_AS(terms_deterministic(sev, 100, 0.5, 3), InstabilityError);
    CHECK_NOTHROW(terms_deterministic(sev, 100, 0.5, 3, unguarded()));
}

TEST_CASE("high-percentile forms") {
    const auto par = SeverityModel::pareto(2.0);
    const auto hp = high_percentile_terms(par, FrequencyModel::poisson(100), 0.999);
    CHECK(rel(hp.q1, 100 * par.censored_moments(hp.q0, 1).mu[1]) <= 1e-12);
    const auto det = high_percentile_terms(par, FrequencyModel::deterministic(10), 0.99);
    const auto ex = explicit_deterministic(par, 10, 0.99);
    CHECK(rel(det.q1, ex.q1) <= 1e-12);
    double prev2 = 1.0;
    for (double a : {0.99, 0.999, 0.9999}) {
        const double gap = rel(high_percentile_terms(par, FrequencyModel::deterministic(10), a).q2,
                               explicit_deterministic(par, 10, a).q2);
        CHECK(gap < prev2);
        prev2 = gap;
    }
    // The gap to the exact Q1 closes as alpha -> 1.
    double prev = 1.0;
    for (double a : {0.99, 0.999, 0.9999, 0.99999}) {
        const auto h = high_percentile_terms(par, FrequencyModel::poisson(100), a);
        const auto s = terms_random(par, FrequencyModel::poisson(100), a, 1);
        const double gap = std::fabs(h.q1 - s.coeffs[1]) / s.coeffs[1];
        CHECK(gap < prev);
        prev = gap;
    }
    CHECK(prev < 1e-4);
}
