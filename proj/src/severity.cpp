#include "tailsum/severity.hpp"

#include "tailsum/bell.hpp"
#include "tailsum/errors.hpp"
#include "tailsum/format.hpp"
#include "tailsum/specfun.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>

namespace tailsum {

namespace sf = specfun;

namespace {

void require_positive(double v, const char* what) {
    if (!(v > 0.0) || !std::isfinite(v))
        throw DomainError(std::string("severity parameter ") + what + " must be positive and finite");
}

void require_order(int order, const char* who) {
    if (order < 0 || order > max_derivative_order)
        throw DomainError(std::string(who) + ": order must lie in [0, " +
                          std::to_string(max_derivative_order) + "]");
}

// d^j log(x)
double log_deriv(int j, double x) {
    if (j == 0)
        return std::log(x);
    double fact = 1.0;
    for (int i = 2; i < j; ++i)
        fact *= i;
    const double sign = (j % 2 == 1) ? 1.0 : -1.0;
    return sign * fact / std::pow(x, j);
}

// d^j (1/x)
double reciprocal_deriv(int j, double x) {
    double fact = 1.0;
    for (int i = 2; i <= j; ++i)
        fact *= i;
    const double sign = (j % 2 == 0) ? 1.0 : -1.0;
    return sign * fact / std::pow(x, j + 1);
}

// (exp(t L) - 1) / t, continuous through t = 0.
double expm1_ratio(double t, double L) {
    const double tl = t * L;
    if (std::fabs(tl) < 1e-8)
        return L * (1.0 + tl / 2.0 + tl * tl / 6.0);
    return std::expm1(tl) / t;
}

// int_{t0}^inf t^{-j-1/2} e^{-t} dt scaled by t0^{j-1/2} e^{t0}; evaluated on
// u = log t, where the integrand is monotone decreasing for j >= 1.
double levy_scaled_tail_integral(int j, double t0) {
    const double u0 = std::log(t0);
    const double u1 = std::log(t0 + 50.0);
    const double rate = j - 0.5;
    auto integrand = [=](double u) {
        return std::exp(-rate * (u - u0) - t0 * std::expm1(u - u0));
    };
    double error = 0.0;
    return boost::math::quadrature::gauss_kronrod<double, 31>::integrate(integrand, u0, u1, 25,
                                                                          1e-13, &error);
}

} // namespace

SeverityModel SeverityModel::levy(double c) {
    require_positive(c, "c");
    return {SeverityKind::levy, c};
}

SeverityModel SeverityModel::lognormal(double sigma) {
    require_positive(sigma, "sigma");
    return {SeverityKind::lognormal, sigma};
}

SeverityModel SeverityModel::pareto(double a) {
    require_positive(a, "a");
    return {SeverityKind::pareto, a};
}

std::string SeverityModel::name() const {
    switch (kind_) {
    case SeverityKind::levy:
        return "levy";
    case SeverityKind::lognormal:
        return "lognormal";
    case SeverityKind::pareto:
        return "pareto";
    }
    return "unknown";
}

std::string SeverityModel::params() const {
    switch (kind_) {
    case SeverityKind::levy:
        return "c=" + format_double(param_);
    case SeverityKind::lognormal:
        return "sigma=" + format_double(param_);
    case SeverityKind::pareto:
        return "a=" + format_double(param_);
    }
    return {};
}

double SeverityModel::cdf(double x) const {
    if (!(x > support_min()))
        return 0.0;
    switch (kind_) {
    case SeverityKind::levy:
        return std::isinf(x) ? 1.0 : sf::erfc(std::sqrt(param_ / (2.0 * x)));
    case SeverityKind::lognormal:
        return sf::normal_cdf(std::log(x) / param_);
    case SeverityKind::pareto:
        return -std::expm1(-param_ * std::log(x));
    }
    return 0.0;
}

double SeverityModel::survival(double x) const {
    if (!(x > support_min()))
        return 1.0;
    switch (kind_) {
    case SeverityKind::levy:
        return std::isinf(x) ? 0.0 : sf::erf(std::sqrt(param_ / (2.0 * x)));
    case SeverityKind::lognormal:
        return sf::normal_cdf(-std::log(x) / param_);
    case SeverityKind::pareto:
        return std::exp(-param_ * std::log(x));
    }
    return 1.0;
}

double SeverityModel::pdf(double x) const {
    if (!(x > support_min()) || std::isinf(x))
        return 0.0;
    switch (kind_) {
    case SeverityKind::levy:
        return std::sqrt(param_ / (2.0 * sf::pi)) * std::pow(x, -1.5) *
               std::exp(-param_ / (2.0 * x));
    case SeverityKind::lognormal:
        return sf::normal_pdf(std::log(x) / param_) / (x * param_);
    case SeverityKind::pareto:
        return param_ * std::exp(-(1.0 + param_) * std::log(x));
    }
    return 0.0;
}

double SeverityModel::quantile(double p) const {
    if (!(p > 0.0 && p < 1.0))
        throw DomainError("severity quantile: probability must lie in (0, 1)");
    if (p > 0.5)
        return quantile_survival(1.0 - p);
    switch (kind_) {
    case SeverityKind::levy: {
        const double y = sf::erfc_inv(p);
        return param_ / (2.0 * y * y);
    }
    case SeverityKind::lognormal:
        return std::exp(param_ * sf::normal_quantile(p));
    case SeverityKind::pareto:
        return std::exp(-std::log1p(-p) / param_);
    }
    return 0.0;
}

double SeverityModel::quantile_survival(double s) const {
    if (!(s > 0.0 && s < 1.0))
        throw DomainError("severity quantile: survival probability must lie in (0, 1)");
    switch (kind_) {
    case SeverityKind::levy: {
        const double y = sf::erf_inv(s);
        return param_ / (2.0 * y * y);
    }
    case SeverityKind::lognormal:
        return std::exp(-param_ * sf::normal_quantile(s));
    case SeverityKind::pareto:
        return std::exp(-std::log(s) / param_);
    }
    return 0.0;
}

void SeverityModel::require_interior(double x, const char* who) const {
    if (!(x > support_min()) || !std::isfinite(x))
        throw DomainError(std::string(who) + ": x must lie in the interior of the support");
}

std::vector<double> SeverityModel::log_pdf_derivs(double x, int order) const {
    require_order(order, "log_pdf_derivs");
    require_interior(x, "log_pdf_derivs");
    std::vector<double> d(static_cast<std::size_t>(order) + 1);
    d[0] = std::log(pdf(x));
    switch (kind_) {
    case SeverityKind::levy:
        for (int j = 1; j <= order; ++j)
            d[j] = -1.5 * log_deriv(j, x) - 0.5 * param_ * reciprocal_deriv(j, x);
        break;
    case SeverityKind::lognormal: {
        std::vector<double> u(static_cast<std::size_t>(order) + 1);
        for (int j = 0; j <= order; ++j)
            u[j] = log_deriv(j, x);
        const double scale = 1.0 / (2.0 * param_ * param_);
        for (int j = 1; j <= order; ++j) {
            double sq = 0.0;
            for (int i = 0; i <= j; ++i)
                sq += bell::binomial(j, i) * u[i] * u[j - i];
            d[j] = -u[j] - scale * sq;
        }
        break;
    }
    case SeverityKind::pareto:
        for (int j = 1; j <= order; ++j)
            d[j] = -(1.0 + param_) * log_deriv(j, x);
        break;
    }
    return d;
}

std::vector<double> SeverityModel::pdf_derivs(double x, int order) const {
    const auto ld = log_pdf_derivs(x, order);
    const double f = pdf(x);
    auto b = bell::bell_complete_all(order, std::span<const double>(ld).subspan(1));
    for (auto& v : b)
        v *= f;
    return b;
}

std::vector<double> SeverityModel::log_cdf_derivs(double x, int order) const {
    require_order(order, "log_cdf_derivs");
    require_interior(x, "log_cdf_derivs");
    const double F = cdf(x);
    if (!(F > 0.0))
        throw DomainError("log_cdf_derivs: F(x) = 0");
    // d^j F = d^(j-1) f
    const auto dF = order > 0 ? pdf_derivs(x, order - 1) : std::vector<double>{};
    std::vector<double> d(static_cast<std::size_t>(order) + 1);
    d[0] = std::log(F);
    for (int j = 1; j <= order; ++j) {
        double acc = dF[j - 1];
        for (int k = 1; k <= j - 1; ++k)
            acc -= bell::binomial(j - 1, k) * dF[k - 1] * d[j - k];
        d[j] = acc / F;
    }
    return d;
}

CensoredMomentTable SeverityModel::censored_moments(double x, int order) const {
    require_order(order, "censored_moments");
    require_interior(x, "censored_moments");
    const double F = cdf(x);
    if (!(F > 0.0))
        throw DomainError("censored_moments: F(x) = 0");

    CensoredMomentTable t;
    t.threshold = x;
    t.mu.assign(static_cast<std::size_t>(order) + 1, 0.0);
    t.mu[0] = 1.0;

    switch (kind_) {
    case SeverityKind::levy: {
        // With t = c / 2l: E[L^j; L <= x] = x^j sqrt(t0) e^-t0 I_j / sqrt(pi).
        const double t0 = param_ / (2.0 * x);
        const double pref = std::sqrt(t0) * std::exp(-t0) / (sf::sqrt_pi * F);
        for (int j = 1; j <= order; ++j)
            t.mu[j] = std::pow(x, j) * pref * levy_scaled_tail_integral(j, t0);
        break;
    }
    case SeverityKind::lognormal: {
        const double z = std::log(x) / param_;
        const double log_norm = sf::log_normal_cdf(z);
        for (int j = 1; j <= order; ++j) {
            const double js = j * param_;
            t.mu[j] = std::exp(0.5 * js * js + sf::log_normal_cdf(z - js) - log_norm);
        }
        break;
    }
    case SeverityKind::pareto: {
        const double L = std::log(x);
        for (int j = 1; j <= order; ++j)
            t.mu[j] = param_ * expm1_ratio(j - param_, L) / F;
        break;
    }
    }
    return t;
}

std::optional<double> SeverityModel::raw_moment(int j) const {
    switch (kind_) {
    case SeverityKind::levy:
        return std::nullopt;
    case SeverityKind::lognormal:
        return std::exp(0.5 * j * j * param_ * param_);
    case SeverityKind::pareto:
        if (param_ > j)
            return param_ / (param_ - j);
        return std::nullopt;
    }
    return std::nullopt;
}

std::optional<double> SeverityModel::tail_index() const {
    switch (kind_) {
    case SeverityKind::levy:
        return 0.5;
    case SeverityKind::lognormal:
        return std::nullopt;
    case SeverityKind::pareto:
        return param_;
    }
    return std::nullopt;
}

std::vector<double> censored_cumulants(const CensoredMomentTable& mu, int order) {
    if (order < 0 || order > mu.order())
        throw DomainError("censored_cumulants: order exceeds the moment table");
    std::vector<double> kappa(static_cast<std::size_t>(order) + 1, 0.0);
    for (int j = 1; j <= order; ++j) {
        double acc = mu.mu[j];
        for (int i = 1; i <= j - 1; ++i)
            acc -= bell::binomial(j - 1, i) * kappa[j - i] * mu.mu[i];
        kappa[j] = acc;
    }
    return kappa;
}

} // namespace tailsum
