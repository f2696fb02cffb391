#pragma once

#include "tailsum/frequency.hpp"
#include "tailsum/severity.hpp"

#include <optional>

// Closed-form low-order coefficients written out term by term. They share no
// code with the recursive engine beyond the severity primitives (cdf, pdf,
// quantile, censored moments) and serve as its cross-check.

namespace tailsum {

struct ExplicitTerms {
    double q0 = 0.0;
    double q1 = 0.0;
    double q2 = 0.0;
    std::optional<double> q3;
};

/// Q_0..Q_2 for a sum of exactly n terms.
ExplicitTerms explicit_deterministic(const SeverityModel& sev, int n, double alpha);

/// Q_0..Q_3 for random N, with lambda_a and its first two derivatives summed
/// directly over the pmf of N.
ExplicitTerms explicit_random(const SeverityModel& sev, const FrequencyModel& freq, double alpha);

/// Q_0..Q_2 from the Poisson closed forms.
ExplicitTerms explicit_poisson(const SeverityModel& sev, double lambda, double alpha);

/// Q_0..Q_2 from the negative binomial closed forms.
ExplicitTerms explicit_negative_binomial(const SeverityModel& sev, double p, double r,
                                         double alpha);

} // namespace tailsum
