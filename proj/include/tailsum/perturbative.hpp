#pragma once

#include "tailsum/frequency.hpp"
#include "tailsum/severity.hpp"

#include <vector>

namespace tailsum {

inline constexpr int default_order = 3;
inline constexpr int max_order = 10;

/// Q^(K) = Q_0 + sum_{k=1}^K Q_k / k!, the expansion of the alpha-quantile of
/// the compound sum around the quantile of its largest term.
struct PerturbativeSeries {
    double alpha = 0.0;
    int order = 0;
    double q0 = 0.0;
    /// coeffs[k] = Q_k for k = 0..order (coeffs[0] = q0).
    std::vector<double> coeffs;
    /// partials[k] = Q^(k); partials[k] - partials[k-1] = coeffs[k] / k!.
    std::vector<double> partials;
    /// ratios[k] = |Q_k / k!| / |Q^(k-1)| for k >= 1; ratios[0] = 0.
    std::vector<double> ratios;

    double value() const { return partials.back(); }
};

/// Intermediate tables of one engine evaluation, all taken at x = Q_0.
/// Index conventions follow the recursions: table[i][j] holds the term with
/// i s-derivatives (or cumulant/moment order i) and j x-derivatives.
struct EngineWorkspace {
    /// omega[k][i][j]: coefficients of Omega^(k) = sum w_ij dt_s^i d_x^j,
    /// with dt_s = Q_1 - d_s.
    std::vector<std::vector<std::vector<double>>> omega;
    /// phi[i][j] = dt_s^i d_x^j phi at (s, x) = (0, Q_0).
    std::vector<std::vector<double>> phi;
    /// Raw mixed derivatives d_s^i d_x^j phi (deterministic N: after removing
    /// the factor e^{s Q_1}).
    std::vector<std::vector<double>> raw;
    /// m_table[i][j] = d_x^j mu_i, k_table[i][j] = d_x^j kappa_i.
    std::vector<std::vector<double>> m_table;
    std::vector<std::vector<double>> k_table;
    /// xi_table[a][i][j] (random N only).
    std::vector<std::vector<std::vector<double>>> xi_table;
};

struct EngineOptions {
    /// Raise InstabilityError when |Q_k / k!| > 10 |Q^(k-1)|.
    bool divergence_guard = true;
    /// Optional sink for the intermediate tables.
    EngineWorkspace* workspace = nullptr;
};

/// F^-1(alpha^{1/n}).
double q0_deterministic(const SeverityModel& sev, int n, double alpha);
/// F^-1(exp(M_N^-1(alpha))).
double q0_random(const SeverityModel& sev, const FrequencyModel& freq, double alpha);

PerturbativeSeries terms_deterministic(const SeverityModel& sev, int n, double alpha,
                                       int order = default_order, EngineOptions options = {});
PerturbativeSeries terms_random(const SeverityModel& sev, const FrequencyModel& freq, double alpha,
                                int order = default_order, EngineOptions options = {});

/// Leading high-percentile forms of Q_1 and Q_2 written with the raw moments
/// nu_1..nu_3 of N.
struct HighPercentileTerms {
    double q0 = 0.0;
    double q1 = 0.0;
    double q2 = 0.0;
};

HighPercentileTerms high_percentile_terms(const SeverityModel& sev, const FrequencyModel& freq,
                                          double alpha);

} // namespace tailsum
