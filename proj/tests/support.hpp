#pragma once

// Independent numerical helpers for tests: quadrature and finite differences
// written without touching the library's own routines.

#include <algorithm>
#include <cmath>
#include <functional>

namespace testsupport {

inline double rel(double got, double want) {
    return want == 0.0 ? std::fabs(got) : std::fabs(got - want) / std::fabs(want);
}

namespace detail {
inline double simpson_step(const std::function<double(double)>& f, double a, double b, double fa,
                           double fm, double fb, double whole, double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double diff = left + right - whole;
    if (depth <= 0 || std::fabs(diff) <= 15.0 * tol)
        return left + right + diff / 15.0;
    return simpson_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           simpson_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}
} // namespace detail

/// Adaptive Simpson quadrature on [a, b] to a relative tolerance.
inline double integrate(const std::function<double(double)>& f, double a, double b,
                        double rel_tol = 1e-13, int depth = 40) {
    // Coarse composite pass to fix the absolute tolerance scale.
    double coarse = 0.0;
    const int n = 64;
    for (int i = 0; i < n; ++i) {
        const double x0 = a + (b - a) * i / n, x1 = a + (b - a) * (i + 1) / n;
        coarse += (x1 - x0) / 6.0 * (f(x0) + 4.0 * f(0.5 * (x0 + x1)) + f(x1));
    }
    const double tol = rel_tol * std::max(std::fabs(coarse), 1e-300);
    double total = 0.0;
    for (int i = 0; i < n; ++i) {
        const double x0 = a + (b - a) * i / n, x1 = a + (b - a) * (i + 1) / n;
        const double fa = f(x0), fb = f(x1), fm = f(0.5 * (x0 + x1));
        const double whole = (x1 - x0) / 6.0 * (fa + 4.0 * fm + fb);
        total += detail::simpson_step(f, x0, x1, fa, fm, fb, whole, tol / n, depth);
    }
    return total;
}

/// Central difference of order 1 or 2 with step h.
inline double central_diff(const std::function<double(double)>& f, double x, double h, int order) {
    if (order == 1)
        return (f(x + h) - f(x - h)) / (2.0 * h);
    return (f(x + h) - 2.0 * f(x) + f(x - h)) / (h * h);
}

/// Five-point first derivative.
inline double diff5(const std::function<double(double)>& f, double x, double h) {
    return (-f(x + 2 * h) + 8 * f(x + h) - 8 * f(x - h) + f(x - 2 * h)) / (12.0 * h);
}

} // namespace testsupport
