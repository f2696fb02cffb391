#include "support.hpp"
#include "tailsum/bell.hpp"

#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

using namespace tailsum::bell;
using testsupport::rel;

TEST_CASE("complete Bell polynomial examples") {
    const std::vector<double> none;
    CHECK(bell_complete(0, none) == 1.0);
    const std::vector<double> x23{2.0, 3.0};
    CHECK(bell_complete(2, x23) == 7.0);
    const std::vector<double> ones{1.0, 1.0, 1.0};
    CHECK(bell_complete(3, ones) == 5.0);
    CHECK(bell_partition(0, none) == 1.0);
    CHECK(bell_partition(3, ones) == 5.0);
    const std::vector<double> pairs{0.0, 1.0, 0.0, 0.0};
    CHECK(bell_partition(4, pairs) == 3.0);
}

TEST_CASE("Bell numbers") {
    const std::vector<double> ones(12, 1.0);
    const double bell_numbers[] = {1, 1, 2, 5, 15, 52, 203, 877, 4140, 21147, 115975, 678570, 4213597};
    const auto all = bell_complete_all(12, ones);
    for (int k = 0; k <= 12; ++k) {
        CHECK(all[k] == bell_numbers[k]);
        CHECK(bell_partition(k, ones) == bell_numbers[k]);
    }
}

TEST_CASE("centered Bell polynomials") {
    // Arguments start at x2.
    const std::vector<double> none;
    CHECK(bell_centered(0, none) == 1.0);
    CHECK(bell_centered(1, none) == 0.0);
    const std::vector<double> x4{1.0, 0.0, 0.0};
    CHECK(bell_centered(4, x4) == 3.0);
    const std::vector<double> x2{5.0};
    CHECK(bell_centered(2, x2) == 5.0);
    // C_k equals B_k with x1 = 0.
    const std::vector<double> tail{0.7, -1.3, 2.1, 0.4, -0.2};
    const std::vector<double> full{0.0, 0.7, -1.3, 2.1, 0.4, -0.2};
    for (int k = 0; k <= 6; ++k)
        CHECK(bell_centered(k, tail) == doctest::Approx(bell_partition(k, full)).epsilon(1e-13));
}

TEST_CASE("recursion agrees with partition enumeration on random arguments") {
    std::mt19937_64 rng(12345);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    double worst = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<double> x(10);
        for (auto& v : x)
            v = u(rng);
        for (int k = 0; k <= 8; ++k) {
            const double a = bell_complete(k, x), b = bell_partition(k, x);
            const double scale = std::max(1.0, std::fabs(b));
            worst = std::max(worst, std::fabs(a - b) / scale);
        }
    }
    CHECK(worst <= 1e-9);
}

TEST_CASE("moments from cumulants") {
    const std::vector<double> k1{3.5};
    CHECK(moments_from_cumulants(k1, 1) == 3.5);
    // Poisson(2): all cumulants 2, second raw moment 2 + 4.
    const std::vector<double> pois{2.0, 2.0, 2.0, 2.0};
    CHECK(moments_from_cumulants(pois, 2) == 6.0);
    // Poisson third raw moment by pmf summation.
    double m3 = 0.0, p = std::exp(-2.0);
    for (int n = 0; n < 80; ++n) {
        m3 += p * n * n * n;
        p *= 2.0 / (n + 1);
    }
    CHECK(rel(moments_from_cumulants(pois, 3), m3) <= 1e-13);
    const std::vector<double> sym{0.0, 4.0, 0.0};
    CHECK(moments_from_cumulants(sym, 3) == 0.0);
}

TEST_CASE("binomial and Stirling tables") {
    CHECK(binomial(10, 3) == 120.0);
    CHECK(binomial(3, 5) == 0.0);
    CHECK(stirling2(5, 2) == 15.0);
    CHECK(stirling2(4, 4) == 1.0);
    CHECK(stirling2(0, 0) == 1.0);
}
