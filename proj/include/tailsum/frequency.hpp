#pragma once

#include "tailsum/severity.hpp"

#include <string>
#include <vector>

namespace tailsum {

enum class FrequencyKind { deterministic, poisson, negative_binomial, generic };

/// Count distribution of N.
///
///   deterministic(n):         P[N = n] = 1
///   poisson(lambda):          M(s) = exp(lambda (e^s - 1))
///   negative_binomial(p, r):  M(s) = p^r (1 - q e^s)^-r, q = 1 - p
///   generic(pmf):             P[N = n] = pmf[n], n = 0..pmf.size()-1
class FrequencyModel {
public:
    static FrequencyModel deterministic(int n);
    static FrequencyModel poisson(double lambda);
    static FrequencyModel negative_binomial(double p, double r);
    static FrequencyModel generic(std::vector<double> pmf);

    FrequencyKind kind() const { return kind_; }
    std::string name() const;
    std::string params() const;

    double param1() const { return p1_; }
    double param2() const { return p2_; }
    const std::vector<double>& generic_pmf() const { return pmf_; }

    double pmf(long n) const;
    double p0() const { return pmf(0); }

    /// E[e^{sN}] for s <= 0.
    double mgf(double s) const;
    /// s with M(s) = alpha, for alpha in (P[N=0], 1).
    double mgf_inverse(double alpha) const;
    /// 1 - e^s for s = mgf_inverse(alpha), without cancellation. This is the
    /// survival probability of the severity at the max-term quantile.
    double max_term_survival(double alpha) const;

    /// E[(N)_m], the falling factorial moment.
    double factorial_moment(int m) const;
    /// nu_s = E[N^s] for s <= 8.
    double moment(int s) const;
    double mean() const { return moment(1); }
    double variance() const;
    /// Index of dispersion Var[N] / E[N].
    double dispersion() const { return variance() / mean(); }

    /// E[(N)_m t^N] at t = F with S = 1 - F supplied separately for precision.
    double tilted_factorial_moment(int m, double F, double S) const;

    /// lambda_a(x) = (f / F) E[N (N-1)^a F^N] for a = 0..a_max.
    std::vector<double> lambda_values(const SeverityModel& sev, double x, int a_max) const;
    double lambda_a(const SeverityModel& sev, double x, int a) const;

    /// Table d[a][k] = d^k lambda_a(x) for a = 0..a_max, k = 0..k_max.
    std::vector<std::vector<double>> lambda_derivs(const SeverityModel& sev, double x, int a_max,
                                                   int k_max) const;

    /// Cumulative distribution table P[N <= n] for n = 0..n_hi, where the
    /// remaining mass beyond n_hi is below `tail`.
    std::vector<double> cdf_table(double tail) const;

private:
    FrequencyModel(FrequencyKind kind, double p1, double p2, std::vector<double> pmf = {})
        : kind_(kind), p1_(p1), p2_(p2), pmf_(std::move(pmf)) {}

    FrequencyKind kind_;
    double p1_; // n, lambda or p
    double p2_; // r for the negative binomial
    std::vector<double> pmf_;
};

} // namespace tailsum
