#include "tailsum/specfun.hpp"

#include "tailsum/errors.hpp"

#include <cmath>
#include <limits>

namespace tailsum::specfun {

namespace {

constexpr double two_over_sqrt_pi = 1.12837916709551257390;

// One Halley step for g(x) = target, given the residual r = g(x) - target and
// g'(x) = s * exp(-x^2) with g''/g' = -2x.
double halley(double x, double residual, double slope) {
    if (slope == 0.0 || !std::isfinite(slope))
        return x;
    const double delta = residual / slope;
    return x - delta / (1.0 + x * delta);
}

double erfc_inv_positive(double y) {
    // y in (0, 1]: result >= 0.
    double x = -normal_quantile(0.5 * y) / sqrt2;
    for (int i = 0; i < 3; ++i) {
        const double slope = -two_over_sqrt_pi * std::exp(-x * x);
        x = halley(x, std::erfc(x) - y, slope);
    }
    return x;
}

} // namespace

double erf(double x) { return std::erf(x); }

double erfc(double x) { return std::erfc(x); }

double erf_inv(double x) {
    if (!(x > -1.0 && x < 1.0)) {
        if (x == 1.0)
            return std::numeric_limits<double>::infinity();
        if (x == -1.0)
            return -std::numeric_limits<double>::infinity();
        throw DomainError("erf_inv: argument must lie in (-1, 1)");
    }
    if (x == 0.0)
        return 0.0;
    const double ax = std::fabs(x);
    if (ax > 0.5) {
        // 1 - |x| is exact here (Sterbenz).
        const double r = erfc_inv_positive(1.0 - ax);
        return x < 0 ? -r : r;
    }
    double y;
    if (ax < 1e-8) {
        y = 0.5 * sqrt_pi * ax * (1.0 + pi * ax * ax / 12.0);
    } else {
        y = normal_quantile(0.5 * (1.0 + ax)) / sqrt2;
    }
    for (int i = 0; i < 3; ++i) {
        const double slope = two_over_sqrt_pi * std::exp(-y * y);
        y = halley(y, std::erf(y) - ax, slope);
    }
    return x < 0 ? -y : y;
}

double erfc_inv(double y) {
    if (!(y > 0.0 && y < 2.0))
        throw DomainError("erfc_inv: argument must lie in (0, 2)");
    if (y < 0.5)
        return erfc_inv_positive(y);
    if (y <= 1.5)
        return erf_inv(1.0 - y); // exact subtraction on [0.5, 1.5]
    return -erfc_inv_positive(2.0 - y);
}

double gamma_fn(double x) {
    if (x <= 0.0 && x == std::nearbyint(x))
        throw DomainError("gamma_fn: pole at nonpositive integer");
    return std::tgamma(x);
}

double log_gamma(double x) {
    if (x <= 0.0 && x == std::nearbyint(x))
        throw DomainError("log_gamma: pole at nonpositive integer");
    int sign = 0;
    return ::lgamma_r(x, &sign);
}

double reciprocal_gamma(double x) {
    if (x <= 0.0 && x == std::nearbyint(x))
        return 0.0;
    return 1.0 / std::tgamma(x);
}

double normal_pdf(double x) {
    constexpr double inv_sqrt_2pi = 0.39894228040143267794;
    return inv_sqrt_2pi * std::exp(-0.5 * x * x);
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / sqrt2); }

double log_normal_cdf(double x) {
    if (x > -5.0)
        return std::log(normal_cdf(x));
    // Mills ratio R(t) = (1 - Phi(t)) / phi(t) by its continued fraction,
    // t = -x > 5.
    const double t = -x;
    double frac = t;
    for (int k = 80; k >= 1; --k)
        frac = t + k / frac;
    const double log_phi = -0.5 * t * t - 0.91893853320467274178;
    return log_phi - std::log(frac);
}

double normal_quantile(double p) {
    if (!(p > 0.0 && p < 1.0)) {
        if (p == 0.0)
            return -std::numeric_limits<double>::infinity();
        if (p == 1.0)
            return std::numeric_limits<double>::infinity();
        throw DomainError("normal_quantile: argument must lie in (0, 1)");
    }
    const double q = p - 0.5;
    if (std::fabs(q) <= 0.425) {
        const double r = 0.180625 - q * q;
        const double num =
            (((((((2.5090809287301226727e+3 * r + 3.3430575583588128105e+4) * r +
                  6.7265770927008700853e+4) * r + 4.5921953931549871457e+4) * r +
                1.3731693765509461125e+4) * r + 1.9715909503065514427e+3) * r +
              1.3314166789178437745e+2) * r + 3.3871328727963666080e0);
        const double den =
            (((((((5.2264952788528545610e+3 * r + 2.8729085735721942674e+4) * r +
                  3.9307895800092710610e+4) * r + 2.1213794301586595867e+4) * r +
                5.3941960214247511077e+3) * r + 6.8718700749205790830e+2) * r +
              4.2313330701600911252e+1) * r + 1.0);
        return q * num / den;
    }
    double r = q < 0 ? p : 1.0 - p;
    r = std::sqrt(-std::log(r));
    double val;
    if (r <= 5.0) {
        r -= 1.6;
        const double num =
            (((((((7.74545014278341407640e-4 * r + 2.27238449892691845833e-2) * r +
                  2.41780725177450611770e-1) * r + 1.27045825245236838258e0) * r +
                3.64784832476320460504e0) * r + 5.76949722146069140550e0) * r +
              4.63033784615654529590e0) * r + 1.42343711074968357734e0);
        const double den =
            (((((((1.05075007164441684324e-9 * r + 5.47593808499534494600e-4) * r +
                  1.51986665636164571966e-2) * r + 1.48103976427480074590e-1) * r +
                6.89767334985100004550e-1) * r + 1.67638483018380384940e0) * r +
              2.05319162663775882187e0) * r + 1.0);
        val = num / den;
    } else {
        r -= 5.0;
        const double num =
            (((((((2.01033439929228813265e-7 * r + 2.71155556874348757815e-5) * r +
                  1.24266094738807843860e-3) * r + 2.65321895265761230930e-2) * r +
                2.96560571828504891230e-1) * r + 1.78482653991729133580e0) * r +
              5.46378491116411436990e0) * r + 6.65790464350110377720e0);
        const double den =
            (((((((2.04426310338993978564e-15 * r + 1.42151175831644588870e-7) * r +
                  1.84631831751005468180e-5) * r + 7.86869131145613259100e-4) * r +
                1.48753612908506148525e-2) * r + 1.36929880922735805310e-1) * r +
              5.99832206555887937690e-1) * r + 1.0);
        val = num / den;
    }
    return q < 0 ? -val : val;
}

} // namespace tailsum::specfun
