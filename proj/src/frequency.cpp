#include "tailsum/frequency.hpp"

#include "tailsum/bell.hpp"
#include "tailsum/errors.hpp"
#include "tailsum/format.hpp"
#include "tailsum/specfun.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace tailsum {

namespace {

double falling(double n, int m) {
    double v = 1.0;
    for (int i = 0; i < m; ++i)
        v *= n - i;
    return v;
}

double rising(double r, int m) {
    double v = 1.0;
    for (int i = 0; i < m; ++i)
        v *= r + i;
    return v;
}

// log F with F = 1 - S, choosing the better-conditioned input.
double log_cdf(double F, double S) { return S < 0.5 ? std::log1p(-S) : std::log(F); }

} // namespace

FrequencyModel FrequencyModel::deterministic(int n) {
    if (n < 1)
        throw DomainError("deterministic frequency: n must be a positive integer");
    return {FrequencyKind::deterministic, static_cast<double>(n), 0.0};
}

FrequencyModel FrequencyModel::poisson(double lambda) {
    if (!(lambda > 0.0) || !std::isfinite(lambda))
        throw DomainError("poisson frequency: lambda must be positive and finite");
    return {FrequencyKind::poisson, lambda, 0.0};
}

FrequencyModel FrequencyModel::negative_binomial(double p, double r) {
    if (!(p > 0.0 && p < 1.0))
        throw DomainError("negative binomial frequency: p must lie in (0, 1)");
    if (!(r > 0.0) || !std::isfinite(r))
        throw DomainError("negative binomial frequency: r must be positive and finite");
    return {FrequencyKind::negative_binomial, p, r};
}

FrequencyModel FrequencyModel::generic(std::vector<double> pmf) {
    if (pmf.empty())
        throw DomainError("generic frequency: empty pmf");
    double total = 0.0;
    for (double v : pmf) {
        if (!(v >= 0.0) || !std::isfinite(v))
            throw DomainError("generic frequency: probabilities must be nonnegative");
        total += v;
    }
    if (std::fabs(total - 1.0) > 1e-12)
        throw DomainError("generic frequency: probabilities must sum to 1");
    return {FrequencyKind::generic, 0.0, 0.0, std::move(pmf)};
}

std::string FrequencyModel::name() const {
    switch (kind_) {
    case FrequencyKind::deterministic:
        return "deterministic";
    case FrequencyKind::poisson:
        return "poisson";
    case FrequencyKind::negative_binomial:
        return "negbin";
    case FrequencyKind::generic:
        return "generic";
    }
    return "unknown";
}

std::string FrequencyModel::params() const {
    switch (kind_) {
    case FrequencyKind::deterministic:
        return "n=" + format_double(p1_);
    case FrequencyKind::poisson:
        return "lambda=" + format_double(p1_);
    case FrequencyKind::negative_binomial:
        return "p=" + format_double(p1_) + ";r=" + format_double(p2_);
    case FrequencyKind::generic: {
        std::string s = "pmf=";
        for (std::size_t i = 0; i < pmf_.size(); ++i) {
            if (i)
                s += ':';
            s += format_double(pmf_[i]);
        }
        return s;
    }
    }
    return {};
}

double FrequencyModel::pmf(long n) const {
    if (n < 0)
        return 0.0;
    const double dn = static_cast<double>(n);
    switch (kind_) {
    case FrequencyKind::deterministic:
        return dn == p1_ ? 1.0 : 0.0;
    case FrequencyKind::poisson:
        return std::exp(dn * std::log(p1_) - p1_ - specfun::log_gamma(dn + 1.0));
    case FrequencyKind::negative_binomial:
        return std::exp(specfun::log_gamma(dn + p2_) - specfun::log_gamma(p2_) -
                        specfun::log_gamma(dn + 1.0) + p2_ * std::log(p1_) +
                        dn * std::log1p(-p1_));
    case FrequencyKind::generic:
        return static_cast<std::size_t>(n) < pmf_.size() ? pmf_[n] : 0.0;
    }
    return 0.0;
}

double FrequencyModel::mgf(double s) const {
    if (s > 0.0)
        throw DomainError("mgf: only s <= 0 is supported");
    switch (kind_) {
    case FrequencyKind::deterministic:
        return std::exp(s * p1_);
    case FrequencyKind::poisson:
        return std::exp(p1_ * std::expm1(s));
    case FrequencyKind::negative_binomial: {
        const double q = 1.0 - p1_;
        // 1 - q e^s = p - q expm1(s)
        return std::exp(-p2_ * std::log((p1_ - q * std::expm1(s)) / p1_));
    }
    case FrequencyKind::generic: {
        double acc = 0.0;
        for (std::size_t n = 0; n < pmf_.size(); ++n)
            acc += pmf_[n] * std::exp(s * static_cast<double>(n));
        return acc;
    }
    }
    return 0.0;
}

double FrequencyModel::max_term_survival(double alpha) const {
    if (!(alpha > 0.0 && alpha < 1.0))
        throw DomainError("quantile level must lie in (0, 1)");
    if (alpha <= p0())
        throw AtomError("quantile level does not exceed P[N = 0]; the quantile is the zero-count atom");
    const double log_alpha = std::log(alpha);
    switch (kind_) {
    case FrequencyKind::deterministic:
        return -std::expm1(log_alpha / p1_);
    case FrequencyKind::poisson:
        return -log_alpha / p1_;
    case FrequencyKind::negative_binomial:
        return p1_ * std::expm1(-log_alpha / p2_) / (1.0 - p1_);
    case FrequencyKind::generic: {
        // 1 - G(1 - S) = sum p_n (1 - (1 - S)^n) is increasing in S; bisect on S
        // to a relative tolerance so that tiny survival values keep full precision.
        const double target = 1.0 - alpha;
        auto excess = [&](double S) {
            const double l = std::log1p(-S);
            double acc = 0.0;
            for (std::size_t n = 1; n < pmf_.size(); ++n)
                acc += pmf_[n] * -std::expm1(static_cast<double>(n) * l);
            return acc - target;
        };
        double lo = 0.0, hi = 1.0;
        for (int it = 0; it < 2000 && hi - lo > 1e-16 * hi; ++it) {
            const double mid = 0.5 * (lo + hi);
            if (excess(mid) < 0.0)
                lo = mid;
            else
                hi = mid;
        }
        return 0.5 * (lo + hi);
    }
    }
    return 0.0;
}

double FrequencyModel::mgf_inverse(double alpha) const {
    return std::log1p(-max_term_survival(alpha));
}

double FrequencyModel::factorial_moment(int m) const {
    if (m < 0)
        throw DomainError("factorial_moment: negative order");
    switch (kind_) {
    case FrequencyKind::deterministic:
        return falling(p1_, m);
    case FrequencyKind::poisson:
        return std::pow(p1_, m);
    case FrequencyKind::negative_binomial:
        return rising(p2_, m) * std::pow((1.0 - p1_) / p1_, m);
    case FrequencyKind::generic: {
        double acc = 0.0;
        for (std::size_t n = 0; n < pmf_.size(); ++n)
            acc += pmf_[n] * falling(static_cast<double>(n), m);
        return acc;
    }
    }
    return 0.0;
}

double FrequencyModel::moment(int s) const {
    if (s < 0 || s > 8)
        throw DomainError("moment: order must lie in [0, 8]");
    double acc = 0.0;
    for (int k = 0; k <= s; ++k)
        acc += bell::stirling2(s, k) * factorial_moment(k);
    return acc;
}

double FrequencyModel::variance() const {
    const double m1 = mean();
    // E[(N)_2] + E[N] - E[N]^2
    return factorial_moment(2) + m1 - m1 * m1;
}

double FrequencyModel::tilted_factorial_moment(int m, double F, double S) const {
    if (m < 0)
        throw DomainError("tilted_factorial_moment: negative order");
    switch (kind_) {
    case FrequencyKind::deterministic:
        if (p1_ < m)
            return 0.0;
        return falling(p1_, m) * std::exp(p1_ * log_cdf(F, S));
    case FrequencyKind::poisson:
        return std::pow(p1_ * F, m) * std::exp(-p1_ * S);
    case FrequencyKind::negative_binomial: {
        const double p = p1_, q = 1.0 - p1_, r = p2_;
        const double xi = p + q * S; // 1 - q F
        return rising(r, m) * std::pow(q * F / xi, m) * std::exp(r * std::log(p / xi));
    }
    case FrequencyKind::generic: {
        const double lf = log_cdf(F, S);
        double acc = 0.0;
        for (std::size_t n = static_cast<std::size_t>(m); n < pmf_.size(); ++n) {
            const double dn = static_cast<double>(n);
            acc += pmf_[n] * falling(dn, m) * std::exp(dn * lf);
        }
        return acc;
    }
    }
    return 0.0;
}

std::vector<double> FrequencyModel::lambda_values(const SeverityModel& sev, double x,
                                                  int a_max) const {
    if (a_max < 0 || a_max >= bell::table_size)
        throw DomainError("lambda_a: order out of range");
    const double F = sev.cdf(x);
    if (!(F > 0.0))
        throw DomainError("lambda_a: F(x) = 0");
    const double S = sev.survival(x);
    const double h = sev.pdf(x) / F;

    // N (N-1)^a = sum_k S(a, k) (N)_{k+1}: every term is nonnegative.
    std::vector<double> tilted(static_cast<std::size_t>(a_max) + 2);
    for (int m = 1; m <= a_max + 1; ++m)
        tilted[m] = tilted_factorial_moment(m, F, S);
    std::vector<double> out(static_cast<std::size_t>(a_max) + 1);
    for (int a = 0; a <= a_max; ++a) {
        double acc = 0.0;
        for (int k = 0; k <= a; ++k)
            acc += bell::stirling2(a, k) * tilted[k + 1];
        out[a] = h * acc;
    }
    return out;
}

double FrequencyModel::lambda_a(const SeverityModel& sev, double x, int a) const {
    return lambda_values(sev, x, a).back();
}

std::vector<std::vector<double>> FrequencyModel::lambda_derivs(const SeverityModel& sev,
                                                               double x, int a_max,
                                                               int k_max) const {
    if (a_max < 0 || k_max < 0)
        throw DomainError("lambda_derivs: negative order");
    const int b_max = a_max + k_max;
    const auto base = lambda_values(sev, x, b_max);
    const auto lf = sev.log_pdf_derivs(x, k_max);
    const auto lF = sev.log_cdf_derivs(x, k_max);

    // L[b][k] is needed for b <= b_max - k.
    std::vector<std::vector<double>> L(static_cast<std::size_t>(b_max) + 1,
                                       std::vector<double>(static_cast<std::size_t>(k_max) + 1));
    for (int b = 0; b <= b_max; ++b)
        L[b][0] = base[b];
    for (int k = 1; k <= k_max; ++k) {
        for (int b = 0; b <= b_max - k; ++b) {
            double acc = 0.0;
            for (int l = 0; l <= k - 1; ++l)
                acc += bell::binomial(k - 1, l) *
                       (lf[l + 1] * L[b][k - l - 1] + lF[l + 1] * L[b + 1][k - l - 1]);
            L[b][k] = acc;
        }
    }
    L.resize(static_cast<std::size_t>(a_max) + 1);
    return L;
}

std::vector<double> FrequencyModel::cdf_table(double tail) const {
    std::vector<double> cdf;
    switch (kind_) {
    case FrequencyKind::deterministic:
        cdf.assign(static_cast<std::size_t>(p1_) + 1, 0.0);
        cdf.back() = 1.0;
        return cdf;
    case FrequencyKind::generic:
        cdf.resize(pmf_.size());
        std::partial_sum(pmf_.begin(), pmf_.end(), cdf.begin());
        for (auto& c : cdf)
            c = std::min(c, 1.0);
        cdf.back() = 1.0;
        return cdf;
    default:
        break;
    }
    const double m = mean();
    const double sd = std::sqrt(variance());
    double acc = 0.0;
    for (long n = 0;; ++n) {
        const double p = pmf(n);
        acc += p;
        cdf.push_back(acc);
        if (n > m + 10.0 * sd + 10.0 && p < tail * 1e-3)
            break;
    }
    // Rounding can push the running sum past 1.
    for (auto& c : cdf)
        c = std::min(c, 1.0);
    cdf.back() = 1.0;
    return cdf;
}

} // namespace tailsum
