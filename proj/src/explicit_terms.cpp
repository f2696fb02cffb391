#include "tailsum/explicit_terms.hpp"

#include "tailsum/errors.hpp"

#include <array>
#include <cmath>

namespace tailsum {

namespace {

// Value with its first two x-derivatives.
struct Jet {
    double v = 0.0, d1 = 0.0, d2 = 0.0;
};

Jet operator+(Jet a, Jet b) { return {a.v + b.v, a.d1 + b.d1, a.d2 + b.d2}; }
Jet operator-(Jet a, Jet b) { return {a.v - b.v, a.d1 - b.d1, a.d2 - b.d2}; }
Jet operator*(double c, Jet a) { return {c * a.v, c * a.d1, c * a.d2}; }
Jet operator*(Jet a, Jet b) {
    return {a.v * b.v, a.d1 * b.v + a.v * b.d1, a.d2 * b.v + 2.0 * a.d1 * b.d1 + a.v * b.d2};
}
Jet reciprocal(Jet a) {
    const double v2 = a.v * a.v;
    return {1.0 / a.v, -a.d1 / v2, 2.0 * a.d1 * a.d1 / (v2 * a.v) - a.d2 / v2};
}

// f'/f and its derivative, written per family.
struct LogSlope {
    double g = 0.0, dg = 0.0;
};

LogSlope log_slope(const SeverityModel& sev, double x) {
    const double p = sev.parameter();
    switch (sev.kind()) {
    case SeverityKind::pareto:
        return {-(p + 1.0) / x, (p + 1.0) / (x * x)};
    case SeverityKind::lognormal: {
        const double s2 = p * p;
        const double u = 1.0 + std::log(x) / s2;
        return {-u / x, u / (x * x) - 1.0 / (s2 * x * x)};
    }
    case SeverityKind::levy:
        return {-1.5 / x + p / (2.0 * x * x), 1.5 / (x * x) - p / (x * x * x)};
    }
    return {};
}

struct Point {
    double x, f, F, g, dg, h, dh;
};

Point evaluate_point(const SeverityModel& sev, double x) {
    Point pt;
    pt.x = x;
    pt.f = sev.pdf(x);
    pt.F = sev.cdf(x);
    const auto ls = log_slope(sev, x);
    pt.g = ls.g;
    pt.dg = ls.dg;
    pt.h = pt.f / pt.F;
    pt.dh = pt.h * (pt.g - pt.h);
    return pt;
}

// Jets of the censored moments mu_1..mu_3 from d mu_p = h (x^p - mu_p).
std::array<Jet, 4> moment_jets(const SeverityModel& sev, const Point& pt) {
    const auto mu = sev.censored_moments(pt.x, 3);
    std::array<Jet, 4> out{};
    out[0] = {1.0, 0.0, 0.0};
    for (int p = 1; p <= 3; ++p) {
        const double xp = std::pow(pt.x, p);
        const double d1 = pt.h * (xp - mu.mu[p]);
        const double d2 = pt.dh * (xp - mu.mu[p]) + pt.h * (p * std::pow(pt.x, p - 1) - d1);
        out[p] = {mu.mu[p], d1, d2};
    }
    return out;
}

} // namespace

ExplicitTerms explicit_deterministic(const SeverityModel& sev, int n, double alpha) {
    if (n < 1 || !(alpha > 0.0 && alpha < 1.0))
        throw DomainError("explicit_deterministic: invalid n or alpha");
    ExplicitTerms t;
    t.q0 = sev.quantile_survival(-std::expm1(std::log(alpha) / n));
    const auto pt = evaluate_point(sev, t.q0);
    const auto mu = sev.censored_moments(t.q0, 2);
    const double var = mu.mu[2] - mu.mu[1] * mu.mu[1];
    const double gap = t.q0 - mu.mu[1];
    t.q1 = (n - 1.0) * mu.mu[1];
    t.q2 = -(n - 1.0) * (((n - 2.0) * pt.h + pt.g) * var + pt.h * gap * gap);
    return t;
}

ExplicitTerms explicit_random(const SeverityModel& sev, const FrequencyModel& freq, double alpha) {
    ExplicitTerms t;
    t.q0 = sev.quantile_survival(freq.max_term_survival(alpha));
    const auto pt = evaluate_point(sev, t.q0);
    const double f = pt.f, F = pt.F;
    const double df = f * pt.g;
    const double d2f = f * (pt.g * pt.g + pt.dg);

    // lambda_a = sum_n p_n n (n-1)^a f F^{n-1}, differentiated term by term.
    const long n_hi = static_cast<long>(freq.cdf_table(1e-20).size()) - 1;
    std::array<Jet, 4> lam{};
    for (long n = 1; n <= n_hi; ++n) {
        const double pn = freq.pmf(n);
        if (pn == 0.0)
            continue;
        const double dn = static_cast<double>(n);
        const double Fn1 = std::pow(F, dn - 1.0);
        const double Fn2 = std::pow(F, dn - 2.0);
        const double Fn3 = std::pow(F, dn - 3.0);
        const Jet base{f * Fn1, df * Fn1 + (dn - 1.0) * f * f * Fn2,
                       d2f * Fn1 + 3.0 * (dn - 1.0) * f * df * Fn2 +
                           (dn - 1.0) * (dn - 2.0) * f * f * f * Fn3};
        double w = pn * dn;
        for (int a = 0; a <= 3; ++a) {
            lam[a] = lam[a] + w * base;
            w *= dn - 1.0;
        }
    }

    const auto mu = moment_jets(sev, pt);
    const Jet k1 = mu[1];
    const Jet k2 = mu[2] - mu[1] * mu[1];
    const Jet k3 = mu[3] - 3.0 * (mu[2] * mu[1]) + 2.0 * (mu[1] * mu[1] * mu[1]);

    const double l0 = lam[0].v;
    t.q1 = lam[1].v * k1.v / l0;
    const double q1 = t.q1;

    const Jet inner2 = lam[1] * k2 + (lam[2] - lam[1] * lam[1] * reciprocal(lam[0])) * (k1 * k1);
    t.q2 = -inner2.d1 / l0;

    const Jet first = q1 * lam[0] - lam[1] * k1;
    const Jet third = (q1 * q1 * q1) * lam[0] - (3.0 * q1 * q1) * (lam[1] * k1) +
                      (3.0 * q1) * (lam[1] * k2 + lam[2] * k1 * k1) - lam[1] * k3 -
                      3.0 * (lam[2] * k1 * k2) - lam[3] * k1 * k1 * k1;
    t.q3 = -(3.0 * t.q2 * first.d1 + third.d2) / l0;
    return t;
}

ExplicitTerms explicit_poisson(const SeverityModel& sev, double lambda, double alpha) {
    ExplicitTerms t;
    const double log_alpha = std::log(alpha);
    t.q0 = sev.quantile_survival(-log_alpha / lambda);
    const auto pt = evaluate_point(sev, t.q0);
    const auto mu = sev.censored_moments(t.q0, 2);
    t.q1 = (lambda + log_alpha) * mu.mu[1];
    t.q2 = -(lambda * pt.f + pt.g) * (log_alpha + lambda) * mu.mu[2] -
           lambda * pt.f * t.q0 * t.q0;
    return t;
}

ExplicitTerms explicit_negative_binomial(const SeverityModel& sev, double p, double r,
                                         double alpha) {
    ExplicitTerms t;
    const double q = 1.0 - p;
    const double log_alpha = std::log(alpha);
    const double h = p * std::exp(-log_alpha / r);
    t.q0 = sev.quantile_survival(p * std::expm1(-log_alpha / r) / q);
    const auto pt = evaluate_point(sev, t.q0);
    const auto mu = sev.censored_moments(t.q0, 2);
    const double m1 = mu.mu[1], m2 = mu.mu[2];
    const double f = pt.f, x = t.q0;
    t.q1 = (1.0 + r) * (std::exp(log_alpha / r) / p - 1.0) * m1;
    const double bracket = m2 * h * (1.0 - h) * (q * (r + 2.0) * f + h * pt.g) +
                           m1 * m1 * (1.0 - h) * (1.0 - h) * (q * (r + 3.0) * f + h * pt.g) +
                           m1 * 2.0 * x * q * h * (1.0 - h) * f + x * x * q * h * h * f;
    t.q2 = -(r + 1.0) / (h * h * h) * bracket;
    return t;
}

} // namespace tailsum
