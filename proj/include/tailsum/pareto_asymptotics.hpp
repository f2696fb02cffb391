#pragma once

#include <array>
#include <vector>

// Leading small-delta behaviour of the first three coefficients for a sum of
// n Pareto(a) terms, delta = 1 - alpha:
//
//   Q_k / (n - 1) ~ A_k (delta/n)^{1 - 1/a} + ... + B_k (delta/n)^{(k-1)/a} + ...

namespace tailsum::pareto {

struct LeadingPair {
    double a_coeff = 0.0;    // multiplies (delta/n)^{1 - 1/a}
    double b_coeff = 0.0;    // multiplies (delta/n)^{(k-1)/a}
    double b_exponent = 0.0; // (k-1)/a
};

struct LeadingTerms {
    double a = 0.0;
    int n = 1;
    /// terms[k-1] for k = 1, 2, 3.
    std::array<LeadingPair, 3> terms{};

    /// (n - 1) [A_k (delta/n)^{1-1/a} + B_k (delta/n)^{(k-1)/a}].
    double evaluate(int k, double delta) const;
};

/// Pole error (DomainError) for integer a, a = 1/2, or a <= 0.
LeadingTerms leading_terms(double a, int n);

/// Least-squares slope of log|Q_2 / Q_1| against log(delta), computed by the
/// recursive engine for a deterministic sum of n terms.
struct ScalingFit {
    double slope = 0.0;
    double intercept = 0.0;
    std::vector<double> deltas;
    std::vector<double> ratios;
};

ScalingFit fit_q2_over_q1(double a, int n, double delta_lo = 1e-5, double delta_hi = 1e-3,
                          int points = 8);

} // namespace tailsum::pareto
