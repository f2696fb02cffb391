#include "support.hpp"
#include "tailsum/baselines.hpp"
#include "tailsum/errors.hpp"
#include "tailsum/levy.hpp"
#include "tailsum/perturbative.hpp"
#include "tailsum/specfun.hpp"

#include <doctest.h>

#include <cmath>

using namespace tailsum;
using testsupport::rel;

TEST_CASE("exact quantile of a Levy sum") {
    const double q = levy::exact_quantile({1.0, 1}, 0.5);
    CHECK(q == doctest::Approx(2.198).epsilon(1e-3));
    // Round trip through the single-term cdf, which is erfc(sqrt(c / 2x)).
    CHECK(std::erfc(std::sqrt(1.0 / (2.0 * q))) == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(q == doctest::Approx(SeverityModel::levy(1.0).quantile(0.5)).epsilon(1e-13));

    for (double alpha : {0.1, 0.9, 0.999})
        for (int n : {2, 10, 100})
            CHECK(rel(levy::exact_quantile({1.0, n}, alpha), double(n) * n * levy::exact_quantile({1.0, 1}, alpha)) <
                  1e-14);
    CHECK(rel(levy::exact_quantile({3.5, 7}, 0.99), 3.5 * levy::exact_quantile({1.0, 7}, 0.99)) < 1e-14);

    CHECK_THROWS_AS(levy::exact_quantile({1.0, 1}, 1.0), DomainError);
    CHECK_THROWS_AS(levy::exact_quantile({0.0, 1}, 0.5), DomainError);
    CHECK_THROWS_AS(levy::exact_quantile({1.0, 0}, 0.5), DomainError);
}

TEST_CASE("relative error coefficients") {
    const auto g1 = levy::gamma_coefficients(1);
    CHECK(g1.gamma2 == 0.0);
    CHECK(g1.gamma3 == 0.0);
    CHECK(levy::gamma_coefficients(2).gamma2 == 0.0);
    CHECK(levy::gamma_coefficients(2).gamma3 == 0.0);
    const auto g = levy::gamma_coefficients(100);
    CHECK(g.gamma2 == doctest::Approx(0.02289).epsilon(1e-3));
    CHECK(g.gamma2 == doctest::Approx(99.0 * 98.0 * (M_PI - 3.0) / 60000.0).epsilon(1e-14));
    CHECK(g.gamma3 == doctest::Approx(99.0 * 98.0 * (M_PI - 3.2) / 60000.0).epsilon(1e-14));
    CHECK(g.gamma1 == doctest::Approx(((2 * M_PI - 5) * 1e4 - 600 * (M_PI - 3) + (4 * M_PI - 13)) / 12e4)
                          .epsilon(1e-14));

    CHECK(levy::ow_error_coefficient(1) == 0.0);
    CHECK(levy::ow_error_coefficient(100) == doctest::Approx(0.52355).epsilon(1e-4));
    CHECK(levy::ow_error_coefficient(1000000) == doctest::Approx(M_PI / 6.0).epsilon(1e-11));
    CHECK_THROWS_AS(levy::gamma_coefficients(0), DomainError);
}

TEST_CASE("measured errors follow the leading-order coefficients") {
    const auto sev = SeverityModel::levy(1.0);
    const auto freq = FrequencyModel::deterministic(100);
    for (double alpha : {0.99, 0.999}) {
        CAPTURE(alpha);
        const double d2 = (1 - alpha) * (1 - alpha);
        const double exact = levy::exact_quantile({1.0, 100}, alpha);
        const auto s = terms_deterministic(sev, 100, alpha, 3);
        const double e2 = (s.partials[2] - exact) / exact;
        const double ratio2 = e2 / (levy::gamma_coefficients(100).gamma2 * d2);
        CHECK(ratio2 >= 0.5);
        CHECK(ratio2 <= 2.0);

        const double sl = single_loss(sev, freq, alpha);
        const double ow = ow_infinite(sev, freq, alpha, OwMode::implicit).value;
        CHECK(ow == sl);
        const double ratio_ow = ((ow - exact) / exact) / (levy::ow_error_coefficient(100) * d2);
        CHECK(ratio_ow >= 0.5);
        CHECK(ratio_ow <= 2.0);
    }
}

TEST_CASE("high-percentile forms of the coefficients") {
    const double c = 1.0;
    const int n = 100;
    const double delta = 1e-4;
    const auto s = terms_deterministic(SeverityModel::levy(c), n, 1.0 - delta, 3);
    const auto a = levy::coefficient_asymptotics({c, n}, delta);
    CHECK(rel(s.coeffs[0], a.q0) < 1e-6);
    CHECK(rel(s.coeffs[1], a.q1) < 1e-3);
    CHECK(rel(s.coeffs[2], a.q2) < 0.05);
    CHECK(s.coeffs[2] * M_PI / (2.0 * n * n * c) ==
          doctest::Approx(-(n - 1.0) * (n + 1.0) / (6.0 * n * n)).epsilon(0.05));
    CHECK(rel(s.coeffs[3], a.q3) < 0.05);

    // The approximation tightens as delta shrinks.
    const auto s_far = terms_deterministic(SeverityModel::levy(c), n, 1.0 - 1e-6, 3);
    const auto a_far = levy::coefficient_asymptotics({c, n}, 1e-6);
    CHECK(rel(s_far.coeffs[2], a_far.q2) < rel(s.coeffs[2], a.q2));
}
