#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

// Complete Bell polynomials B_k and their centered version
// C_k(x_2..x_k) = B_k(0, x_2, ..., x_k), plus the small combinatorial tables
// the engine uses in its inner loops.

namespace tailsum::bell {

/// Largest n for which binomial(n, k) and stirling2(n, k) are tabulated.
inline constexpr int table_size = 64;

namespace detail {

constexpr auto make_binomials() {
    std::array<std::array<double, table_size + 1>, table_size + 1> t{};
    for (int n = 0; n <= table_size; ++n) {
        t[n][0] = 1.0;
        for (int k = 1; k <= n; ++k)
            t[n][k] = t[n - 1][k - 1] + (k <= n - 1 ? t[n - 1][k] : 0.0);
    }
    return t;
}

constexpr auto make_stirling2() {
    std::array<std::array<double, table_size + 1>, table_size + 1> t{};
    t[0][0] = 1.0;
    for (int n = 1; n <= table_size; ++n)
        for (int k = 1; k <= n; ++k)
            t[n][k] = k * t[n - 1][k] + t[n - 1][k - 1];
    return t;
}

inline constexpr auto binomials = make_binomials();
inline constexpr auto stirlings = make_stirling2();

} // namespace detail

/// Binomial coefficient C(n, k); zero outside 0 <= k <= n.
constexpr double binomial(int n, int k) {
    if (k < 0 || n < 0 || k > n)
        return 0.0;
    return detail::binomials[n][k];
}

/// Stirling number of the second kind S(n, k).
constexpr double stirling2(int n, int k) {
    if (k < 0 || n < 0 || k > n)
        return 0.0;
    return detail::stirlings[n][k];
}

/// B_k(x_1, ..., x_k). `x[0]` holds x_1. Throws DomainError if x.size() < k.
double bell_complete(int k, std::span<const double> x);

/// All of B_0..B_k in one pass.
std::vector<double> bell_complete_all(int k, std::span<const double> x);

/// C_k(x_2, ..., x_k). Here `x[0]` holds x_2; C_0 = 1 and C_1 = 0.
double bell_centered(int k, std::span<const double> x);

/// B_k by explicit enumeration of the set partitions of {1..k}
/// (restricted growth strings). Exponential cost; k <= 12.
double bell_partition(int k, std::span<const double> x);

/// Raw moment mu_q from cumulants kappa_1..kappa_q.
double moments_from_cumulants(std::span<const double> kappas, int q);

} // namespace tailsum::bell
