#pragma once

// Ground truth for sums of n i.i.d. Levy(0, c) terms. By stability the sum is
// again Levy with scale c n^2.

namespace tailsum::levy {

struct LevyExact {
    double c = 1.0;
    int n = 1;
};

/// c n^2 / (2 [erf^-1(1 - alpha)]^2).
double exact_quantile(const LevyExact& le, double alpha);

/// Leading coefficients of the relative error (Q^(k) - Q) / Q ~ gamma_k (1 - alpha)^2.
struct GammaCoefficients {
    double gamma1 = 0.0;
    double gamma2 = 0.0;
    double gamma3 = 0.0;
};

GammaCoefficients gamma_coefficients(int n);

/// (pi / 6) (n^2 - 1) / n^2, the analogous coefficient of the single-loss
/// (equivalently Omey-Willekens) approximation.
double ow_error_coefficient(int n);

/// High-percentile forms of Q_0..Q_3 up to O(delta) inside the bracket,
/// delta = 1 - alpha.
struct CoefficientAsymptotics {
    double q0 = 0.0;
    double q1 = 0.0;
    double q2 = 0.0;
    double q3 = 0.0;
};

CoefficientAsymptotics coefficient_asymptotics(const LevyExact& le, double delta);

} // namespace tailsum::levy
