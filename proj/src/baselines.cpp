#include "tailsum/baselines.hpp"

#include "tailsum/errors.hpp"
#include "tailsum/perturbative.hpp"
#include "tailsum/specfun.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/tools/roots.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <limits>

namespace tailsum {

namespace {

void require_alpha(double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0))
        throw DomainError("quantile level must lie in (0, 1)");
}

double finite_mean(const SeverityModel& sev) {
    const auto m = sev.mean();
    if (!m)
        throw InapplicableError("infinite_mean", "method requires a finite severity mean");
    return *m;
}

// (nu_2 / nu_1 - 1) = E[N(N-1)] / E[N]
double dispersion_factor(const FrequencyModel& freq) {
    return freq.factorial_moment(2) / freq.factorial_moment(1);
}

// Solves 1 - F(Q) = target(Q) where target decreases more slowly than the
// survival function. Damped fixed point first, bracketed root as fallback.
ApproximationEstimate solve_implicit(MethodId id, const SeverityModel& sev, double q_start,
                                     const std::function<double(double)>& target,
                                     const std::function<double(double)>& residual) {
    ApproximationEstimate est;
    est.method = id;
    double q = q_start;
    double damping = 1.0;
    double last_step = 0.0;
    bool converged = false;
    int it = 0;
    for (; it < 200; ++it) {
        const double t = target(q);
        if (!(t > 0.0 && t < 1.0))
            break;
        const double next = sev.quantile_survival(t);
        const double step = next - q;
        if (std::fabs(step) <= 1e-14 * std::fabs(q)) {
            q = next;
            converged = true;
            break;
        }
        if (last_step != 0.0 && (step > 0.0) != (last_step > 0.0))
            damping *= 0.5;
        last_step = step;
        q += damping * step;
    }

    if (!converged) {
        // g(Q) = 1 - F(Q) - target(Q) is positive at the single-loss point.
        auto g = [&](double x) { return sev.survival(x) - target(x); };
        double lo = q_start, hi = 10.0 * q_start;
        int expand = 0;
        while (g(hi) > 0.0) {
            lo = hi;
            hi *= 10.0;
            if (++expand > 60)
                throw ConvergenceError("implicit equation: no sign change found");
        }
        if (g(lo) < 0.0)
            throw ConvergenceError("implicit equation: lower bracket is not valid");
        boost::uintmax_t max_iter = 300;
        const auto r = boost::math::tools::toms748_solve(
            g, lo, hi, boost::math::tools::eps_tolerance<double>(52), max_iter);
        q = 0.5 * (r.first + r.second);
        it += static_cast<int>(max_iter);
        if (max_iter >= 300)
            throw ConvergenceError("implicit equation: root finder did not converge");
    }

    est.value = q;
    est.solver = SolverInfo{it, residual(q)};
    return est;
}

} // namespace

std::string method_name(MethodId id) {
    switch (id.method) {
    case Method::sl:
        return "SL";
    case Method::sl_mean:
        return "SL_mean";
    case Method::ow_implicit:
        return "OW_implicit";
    case Method::ow_star:
        return "OW_star";
    case Method::ow_inf_implicit:
        return "OW_inf_implicit";
    case Method::ow_inf_star:
        return "OW_inf_star";
    case Method::bm1:
        return "BM1";
    case Method::bm2:
        return "BM2";
    case Method::alb1:
        return "ALB1";
    case Method::pert:
        return "PERT(" + std::to_string(id.order) + ")";
    }
    return "unknown";
}

MethodId parse_method(const std::string& text) {
    static const std::array<std::pair<const char*, Method>, 9> plain{{
        {"SL", Method::sl},
        {"SL_mean", Method::sl_mean},
        {"OW_implicit", Method::ow_implicit},
        {"OW_star", Method::ow_star},
        {"OW_inf_implicit", Method::ow_inf_implicit},
        {"OW_inf_star", Method::ow_inf_star},
        {"BM1", Method::bm1},
        {"BM2", Method::bm2},
        {"ALB1", Method::alb1},
    }};
    for (const auto& [name, m] : plain)
        if (text == name)
            return {m, 0};
    if (text == "PERT")
        return {Method::pert, default_order};
    if (text.size() > 6 && text.rfind("PERT(", 0) == 0 && text.back() == ')') {
        const std::string digits = text.substr(5, text.size() - 6);
        if (!digits.empty() && digits.find_first_not_of("0123456789") == std::string::npos &&
            digits.size() <= 2) {
            const int k = std::stoi(digits);
            if (k <= max_order)
                return {Method::pert, k};
        }
    }
    throw DomainError("unknown method '" + text + "'");
}

double single_loss(const SeverityModel& sev, const FrequencyModel& freq, double alpha) {
    require_alpha(alpha);
    const double s = (1.0 - alpha) / freq.mean();
    if (!(s < 1.0))
        throw DomainError("single-loss approximation: (1 - alpha) / E[N] must be below 1");
    return sev.quantile_survival(s);
}

double mean_corrected(const SeverityModel& sev, const FrequencyModel& freq, double alpha) {
    const double mu = finite_mean(sev);
    return single_loss(sev, freq, alpha) + (freq.mean() - 1.0) * mu;
}

ApproximationEstimate ow_finite(const SeverityModel& sev, const FrequencyModel& freq, double alpha,
                                OwMode mode) {
    const double mu = finite_mean(sev);
    const double q_sl = single_loss(sev, freq, alpha);
    const double d = dispersion_factor(freq);
    if (mode == OwMode::star)
        return {{Method::ow_star, 0}, q_sl + d * mu, std::nullopt};

    const double nu1 = freq.mean();
    const double delta = 1.0 - alpha;
    auto target = [&](double q) { return delta / nu1 - d * mu * sev.pdf(q); };
    auto residual = [&](double q) {
        const double implied = 1.0 - nu1 * (sev.survival(q) + d * mu * sev.pdf(q));
        return std::fabs(implied - alpha);
    };
    return solve_implicit({Method::ow_implicit, 0}, sev, q_sl, target, residual);
}

double ow_constant(double a) {
    if (!(a > 0.0 && a <= 1.0))
        throw DomainError("c_a is defined for tail index 0 < a <= 1");
    if (a == 1.0)
        return 1.0;
    const double g = specfun::gamma_fn(1.0 - a);
    // + 0.0 turns the exact zero at a = 1/2 into +0.
    return (1.0 - 1.0 / a) * g * g * specfun::reciprocal_gamma(1.0 - 2.0 * a) / 2.0 + 0.0;
}

double integrated_survival(const SeverityModel& sev, double x) {
    if (!(x > sev.support_min()))
        throw DomainError("integrated_survival: x must lie inside the support");
    const double F = sev.cdf(x);
    const double mu1 = sev.censored_moments(x, 1).mu[1];
    return sev.survival(x) * x + F * mu1;
}

ApproximationEstimate ow_infinite(const SeverityModel& sev, const FrequencyModel& freq,
                                  double alpha, OwMode mode) {
    const auto index = sev.tail_index();
    if (!index)
        throw InapplicableError("no_tail_index",
                                "method requires a regularly varying severity density");
    if (*index > 1.0)
        throw DomainError("infinite-mean approximation requires tail index a <= 1");
    const double c = ow_constant(*index);
    const double q_sl = single_loss(sev, freq, alpha);
    const double d = dispersion_factor(freq);
    if (mode == OwMode::star)
        return {{Method::ow_inf_star, 0}, q_sl + c * d * integrated_survival(sev, q_sl),
                std::nullopt};
    if (c == 0.0)
        return {{Method::ow_inf_implicit, 0}, q_sl, SolverInfo{0, 0.0}};

    const double nu1 = freq.mean();
    const double delta = 1.0 - alpha;
    auto correction = [&](double q) { return c * d * integrated_survival(sev, q) * sev.pdf(q); };
    auto target = [&](double q) { return delta / nu1 - correction(q); };
    auto residual = [&](double q) {
        const double implied = 1.0 - nu1 * (sev.survival(q) + correction(q));
        return std::fabs(implied - alpha);
    };
    return solve_implicit({Method::ow_inf_implicit, 0}, sev, q_sl, target, residual);
}

ApproximationEstimate barbe_mccormick2_kernel(const SeverityModel& sev, double lambda, double alpha,
                                              double mu1, double mu2) {
    require_alpha(alpha);
    const double delta = 1.0 - alpha;
    const double shift = lambda * mu1;
    const double sd = std::sqrt(lambda * mu2);

    // lambda E[1 - F(Q - lambda mu_1 + sd Z)] - (1 - alpha); decreasing in Q.
    // Below z* the argument leaves the support and the survival is 1; the
    // remaining piece is smooth and integrated adaptively.
    auto excess = [&](double q) {
        const double base = q - shift;
        if (sd == 0.0)
            return lambda * sev.survival(base) - delta;
        const double z_star = std::max((sev.support_min() - base) / sd, -40.0);
        auto integrand = [&](double z) { return specfun::normal_pdf(z) * sev.survival(base + sd * z); };
        const double upper = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
            integrand, z_star, std::numeric_limits<double>::infinity(), 15, 1e-13);
        return lambda * (specfun::normal_cdf(z_star) + upper) - delta;
    };

    const FrequencyModel poisson = FrequencyModel::poisson(lambda);
    double lo = single_loss(sev, poisson, alpha) + shift;
    double hi = lo;
    int guard = 0;
    while (excess(lo) < 0.0) {
        lo = sev.support_min() + 0.5 * (lo - sev.support_min());
        if (++guard > 200)
            throw ConvergenceError("BM2: no lower bracket");
    }
    guard = 0;
    while (excess(hi) > 0.0) {
        hi *= 2.0;
        if (++guard > 200)
            throw ConvergenceError("BM2: no upper bracket");
    }
    boost::uintmax_t max_iter = 300;
    const auto r = boost::math::tools::toms748_solve(
        excess, lo, hi, boost::math::tools::eps_tolerance<double>(52), max_iter);
    if (max_iter >= 300)
        throw ConvergenceError("BM2: root finder did not converge");
    const double q = 0.5 * (r.first + r.second);
    return {{Method::bm2, 0}, q, SolverInfo{static_cast<int>(max_iter), std::fabs(excess(q))}};
}

ApproximationEstimate barbe_mccormick(const SeverityModel& sev, const FrequencyModel& freq,
                                      double alpha, int m) {
    if (freq.kind() != FrequencyKind::poisson)
        throw InapplicableError("poisson_only", "Barbe-McCormick approximation assumes Poisson N");
    const double lambda = freq.param1();
    if (m == 1) {
        const double mu = finite_mean(sev);
        return {{Method::bm1, 0}, single_loss(sev, freq, alpha) + lambda * mu, std::nullopt};
    }
    if (m != 2)
        throw DomainError("Barbe-McCormick order must be 1 or 2");
    const auto mu1 = sev.raw_moment(1);
    const auto mu2 = sev.raw_moment(2);
    if (!mu1 || !mu2)
        throw InapplicableError("infinite_moment", "BM2 requires finite first and second moments");
    return barbe_mccormick2_kernel(sev, lambda, alpha, *mu1, *mu2);
}

double albrecher_m1(const SeverityModel& sev, const FrequencyModel& freq, double alpha) {
    const double mu = finite_mean(sev);
    return single_loss(sev, freq, alpha) + dispersion_factor(freq) * mu;
}

ApproximationEstimate evaluate_method(MethodId id, const SeverityModel& sev,
                                      const FrequencyModel& freq, double alpha) {
    switch (id.method) {
    case Method::sl:
        return {id, single_loss(sev, freq, alpha), std::nullopt};
    case Method::sl_mean:
        return {id, mean_corrected(sev, freq, alpha), std::nullopt};
    case Method::ow_implicit:
        return ow_finite(sev, freq, alpha, OwMode::implicit);
    case Method::ow_star:
        return ow_finite(sev, freq, alpha, OwMode::star);
    case Method::ow_inf_implicit:
        return ow_infinite(sev, freq, alpha, OwMode::implicit);
    case Method::ow_inf_star:
        return ow_infinite(sev, freq, alpha, OwMode::star);
    case Method::bm1:
        return barbe_mccormick(sev, freq, alpha, 1);
    case Method::bm2:
        return barbe_mccormick(sev, freq, alpha, 2);
    case Method::alb1:
        return {id, albrecher_m1(sev, freq, alpha), std::nullopt};
    case Method::pert: {
        const auto series = freq.kind() == FrequencyKind::deterministic
                                ? terms_deterministic(sev, static_cast<int>(freq.param1()), alpha,
                                                      id.order)
                                : terms_random(sev, freq, alpha, id.order);
        return {id, series.value(), std::nullopt};
    }
    }
    throw DomainError("unknown method");
}

} // namespace tailsum
