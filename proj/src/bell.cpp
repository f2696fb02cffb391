#include "tailsum/bell.hpp"

#include "tailsum/errors.hpp"

#include <algorithm>
#include <string>

namespace tailsum::bell {

namespace {

void require_length(int k, std::size_t have, std::size_t need, const char* who) {
    if (k < 0)
        throw DomainError(std::string(who) + ": negative order");
    if (have < need)
        throw DomainError(std::string(who) + ": order " + std::to_string(k) + " needs " +
                          std::to_string(need) + " arguments, got " + std::to_string(have));
}

} // namespace

std::vector<double> bell_complete_all(int k, std::span<const double> x) {
    require_length(k, x.size(), static_cast<std::size_t>(k < 0 ? 0 : k), "bell_complete");
    std::vector<double> b(static_cast<std::size_t>(k) + 1, 0.0);
    b[0] = 1.0;
    for (int n = 1; n <= k; ++n) {
        double acc = 0.0;
        for (int s = 1; s <= n; ++s)
            acc += binomial(n - 1, s - 1) * x[s - 1] * b[n - s];
        b[n] = acc;
    }
    return b;
}

double bell_complete(int k, std::span<const double> x) { return bell_complete_all(k, x).back(); }

double bell_centered(int k, std::span<const double> x) {
    if (k < 0)
        throw DomainError("bell_centered: negative order");
    if (k == 0)
        return 1.0;
    if (k == 1)
        return 0.0;
    require_length(k, x.size(), static_cast<std::size_t>(k - 1), "bell_centered");
    std::vector<double> c(static_cast<std::size_t>(k) + 1, 0.0);
    c[0] = 1.0;
    for (int n = 2; n <= k; ++n) {
        double acc = 0.0;
        for (int s = 2; s <= n; ++s)
            acc += binomial(n - 1, s - 1) * x[s - 2] * c[n - s];
        c[n] = acc;
    }
    return c[k];
}

double bell_partition(int k, std::span<const double> x) {
    if (k > 12)
        throw DomainError("bell_partition: enumeration limited to k <= 12");
    require_length(k, x.size(), static_cast<std::size_t>(k < 0 ? 0 : k), "bell_partition");
    if (k == 0)
        return 1.0;

    // Restricted growth string a[0..k-1]: a[0] = 0, a[i] <= 1 + max(a[0..i-1]).
    std::vector<int> a(k, 0);
    std::vector<int> block_size(k, 0);
    double total = 0.0;
    while (true) {
        std::fill(block_size.begin(), block_size.end(), 0);
        for (int v : a)
            ++block_size[v];
        double term = 1.0;
        for (int s : block_size)
            if (s > 0)
                term *= x[s - 1];
        total += term;

        // Advance to the next restricted growth string.
        int i = k - 1;
        while (i > 0) {
            int prefix_max = 0;
            for (int j = 0; j < i; ++j)
                prefix_max = std::max(prefix_max, a[j]);
            if (a[i] <= prefix_max) {
                ++a[i];
                for (int j = i + 1; j < k; ++j)
                    a[j] = 0;
                break;
            }
            --i;
        }
        if (i == 0)
            break;
    }
    return total;
}

double moments_from_cumulants(std::span<const double> kappas, int q) {
    return bell_complete(q, kappas);
}

} // namespace tailsum::bell
