#include "tailsum/perturbative.hpp"

#include "tailsum/bell.hpp"
#include "tailsum/errors.hpp"

#include <cmath>
#include <string>

namespace tailsum {

namespace {

using Table = std::vector<std::vector<double>>;

Table make_table(int rows, int cols) {
    return Table(static_cast<std::size_t>(rows), std::vector<double>(static_cast<std::size_t>(cols), 0.0));
}

void require_order(int order) {
    if (order < 0 || order > max_order)
        throw DomainError("perturbative order must lie in [0, " + std::to_string(max_order) + "]");
}

void require_alpha(double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0))
        throw DomainError("quantile level must lie in (0, 1)");
}

// d^p x^i
double power_deriv(int i, int p, double x) {
    if (p > i)
        return 0.0;
    double c = 1.0;
    for (int t = 0; t < p; ++t)
        c *= i - t;
    return c * std::pow(x, i - p);
}

// m[i][j] = d^j mu_i(x) for i <= I, j <= J, from d mu_i = (f/F)(x^i - mu_i).
Table censored_moment_derivs(const SeverityModel& sev, double x, int I, int J) {
    const auto mu = sev.censored_moments(x, I);
    const auto lF = sev.log_cdf_derivs(x, J);
    Table m = make_table(I + 1, J + 1);
    m[0][0] = 1.0;
    for (int i = 1; i <= I; ++i) {
        m[i][0] = mu.mu[i];
        for (int j = 1; j <= J; ++j) {
            double acc = 0.0;
            for (int k = 0; k <= j - 1; ++k)
                acc += bell::binomial(j - 1, k) * lF[1 + k] *
                       (power_deriv(i, j - 1 - k, x) - m[i][j - 1 - k]);
            m[i][j] = acc;
        }
    }
    return m;
}

// k[i][j] = d^j kappa_i(x) from the moment table (row 0 unused).
Table censored_cumulant_derivs(const Table& m, int I, int J) {
    Table k = make_table(I + 1, J + 1);
    for (int i = 1; i <= I; ++i)
        for (int j = 0; j <= J; ++j) {
            double acc = m[i][j];
            for (int l = 1; l <= i - 1; ++l)
                for (int t = 0; t <= j; ++t)
                    acc -= bell::binomial(i - 1, l) * bell::binomial(j, t) * m[l][t] *
                           k[i - l][j - t];
            k[i][j] = acc;
        }
    return k;
}

double factorial(int k) {
    double v = 1.0;
    for (int i = 2; i <= k; ++i)
        v *= i;
    return v;
}

// Solves Omega^(k) phi = 0 order by order for Q_2..Q_K given phi and Q_1.
PerturbativeSeries solve_series(double alpha, double q0, double q1, const Table& phi, int K,
                                const EngineOptions& options) {
    PerturbativeSeries s;
    s.alpha = alpha;
    s.order = K;
    s.q0 = q0;
    s.coeffs.assign(static_cast<std::size_t>(K) + 1, 0.0);
    s.coeffs[0] = q0;
    if (K >= 1)
        s.coeffs[1] = q1;

    std::vector<Table> omega(static_cast<std::size_t>(K) + 1, make_table(K + 1, K > 0 ? K : 1));
    if (K >= 1)
        omega[1][1][0] = 1.0;
    auto& Q = s.coeffs;
    for (int k = 2; k <= K; ++k) {
        double acc = 0.0;
        for (int i = 0; i <= k; ++i)
            for (int j = 0; j <= k - 1; ++j) {
                if (i == 0 && j == 0)
                    continue;
                double w = 0.0;
                if (i >= 1 && j >= 1)
                    w += omega[k - 1][i - 1][j - 1];
                if (j >= 1)
                    for (int l = 1; l <= k - 2; ++l)
                        w += bell::binomial(k - 1, l) * Q[k - l] * omega[l][i][j - 1];
                omega[k][i][j] = w;
                acc += w * phi[i][j];
            }
        Q[k] = -acc / phi[0][0];
        omega[k][0][0] = Q[k];
    }

    s.partials.assign(static_cast<std::size_t>(K) + 1, q0);
    s.ratios.assign(static_cast<std::size_t>(K) + 1, 0.0);
    for (int k = 1; k <= K; ++k) {
        const double term = Q[k] / factorial(k);
        s.partials[k] = s.partials[k - 1] + term;
        s.ratios[k] = std::fabs(term) / std::fabs(s.partials[k - 1]);
        if (!std::isfinite(term))
            throw InstabilityError("perturbative term of order " + std::to_string(k) +
                                   " is not finite");
        if (options.divergence_guard && s.ratios[k] > 10.0)
            throw InstabilityError("perturbative series diverges at order " + std::to_string(k) +
                                   ": |Q_k/k!| exceeds 10 times the partial sum");
    }
    if (options.workspace)
        options.workspace->omega = std::move(omega);
    return s;
}

} // namespace

double q0_deterministic(const SeverityModel& sev, int n, double alpha) {
    require_alpha(alpha);
    if (n < 1)
        throw DomainError("number of terms must be positive");
    // F(Q_0) = alpha^{1/n}
    return sev.quantile_survival(-std::expm1(std::log(alpha) / n));
}

double q0_random(const SeverityModel& sev, const FrequencyModel& freq, double alpha) {
    require_alpha(alpha);
    return sev.quantile_survival(freq.max_term_survival(alpha));
}

PerturbativeSeries terms_deterministic(const SeverityModel& sev, int n, double alpha, int order,
                                       EngineOptions options) {
    require_order(order);
    const double q0 = q0_deterministic(sev, n, alpha);
    const int K = order;
    if (K == 0)
        return solve_series(alpha, q0, 0.0, make_table(1, 1), 0, options);
    const int J = K - 1;
    const double n1 = n - 1.0;

    const Table m = censored_moment_derivs(sev, q0, K, J);
    Table k = censored_cumulant_derivs(m, K, J);
    const double q1 = n1 * m[1][0];

    // Centre the remainder sum on its conditional mean: with kappa_1 shifted
    // by mu_1(Q_0) the s-derivatives below are those of e^{-s Q_1} phi, so
    // dt_s^i = (Q_1 - d_s)^i acts as (-d_s)^i without binomial cancellation.
    k[1][0] = 0.0;

    // Conditional MGF of the remainder given the maximum, exp((n-1) K(s; x)).
    Table mgf = make_table(K + 1, J + 1);
    mgf[0][0] = 1.0;
    for (int i = 1; i <= K; ++i)
        for (int j = 0; j <= J; ++j) {
            double acc = 0.0;
            for (int l = 0; l <= i - 1; ++l)
                for (int t = 0; t <= j; ++t)
                    acc += bell::binomial(i - 1, l) * bell::binomial(j, t) * mgf[l][t] *
                           k[i - l][j - t];
            mgf[i][j] = n1 * acc;
        }

    // Density of the maximum, normalised to 1 at Q_0:
    // d^k f_X / f_X = B_k(f~^(j) + (n-1) F~^(j)).
    const auto lf = sev.log_pdf_derivs(q0, J);
    const auto lF = sev.log_cdf_derivs(q0, J);
    std::vector<double> args(static_cast<std::size_t>(J));
    for (int j = 1; j <= J; ++j)
        args[j - 1] = lf[j] + n1 * lF[j];
    const auto dfx = bell::bell_complete_all(J, args);

    Table raw = make_table(K + 1, J + 1);
    Table phi = make_table(K + 1, J + 1);
    for (int i = 0; i <= K; ++i)
        for (int j = 0; j <= J; ++j) {
            double acc = 0.0;
            for (int t = 0; t <= j; ++t)
                acc += bell::binomial(j, t) * mgf[i][j - t] * dfx[t];
            raw[i][j] = acc;
            phi[i][j] = (i % 2 == 0) ? acc : -acc;
        }

    auto series = solve_series(alpha, q0, q1, phi, K, options);
    if (options.workspace) {
        auto& ws = *options.workspace;
        ws.phi = std::move(phi);
        ws.raw = std::move(raw);
        ws.m_table = m;
        ws.k_table = std::move(k);
        ws.xi_table.clear();
    }
    return series;
}

PerturbativeSeries terms_random(const SeverityModel& sev, const FrequencyModel& freq, double alpha,
                                int order, EngineOptions options) {
    require_order(order);
    const double q0 = q0_random(sev, freq, alpha);
    const int K = order;
    if (K == 0)
        return solve_series(alpha, q0, 0.0, make_table(1, 1), 0, options);
    const int J = K - 1;

    const Table m = censored_moment_derivs(sev, q0, K, J);
    const Table k = censored_cumulant_derivs(m, K, J);

    auto lam = freq.lambda_derivs(sev, q0, K, J);
    const double scale = lam[0][0];
    if (!(scale > 0.0))
        throw DomainError("lambda_0 vanishes at Q_0");
    for (auto& row : lam)
        for (auto& v : row)
            v /= scale;

    // xi[b][i][j]: i s-derivatives and j x-derivatives of
    // E[(N-1)^b f_[N](x) exp((N-1) K(s; x))], built with b descending.
    std::vector<Table> xi(static_cast<std::size_t>(K) + 1);
    for (int b = K; b >= 0; --b) {
        xi[b] = make_table(K - b + 1, J + 1);
        for (int j = 0; j <= J; ++j)
            xi[b][0][j] = lam[b][j];
        for (int i = 1; i <= K - b; ++i)
            for (int j = 0; j <= J; ++j) {
                double acc = 0.0;
                for (int l = 0; l <= i - 1; ++l)
                    for (int t = 0; t <= j; ++t)
                        acc += bell::binomial(i - 1, l) * bell::binomial(j, t) *
                               xi[b + 1][l][t] * k[i - l][j - t];
                xi[b][i][j] = acc;
            }
    }

    const Table& raw = xi[0];
    const double q1 = raw[1][0] / raw[0][0];
    Table phi = make_table(K + 1, J + 1);
    for (int i = 0; i <= K; ++i)
        for (int j = 0; j <= J; ++j) {
            double acc = 0.0;
            double q1_pow = 1.0;
            for (int l = 0; l <= i; ++l) {
                const double sign = ((i - l) % 2 == 0) ? 1.0 : -1.0;
                acc += bell::binomial(i, l) * q1_pow * sign * raw[i - l][j];
                q1_pow *= q1;
            }
            phi[i][j] = acc;
        }
    phi[1][0] = 0.0; // exact by the definition of Q_1

    auto series = solve_series(alpha, q0, q1, phi, K, options);
    if (options.workspace) {
        auto& ws = *options.workspace;
        ws.phi = std::move(phi);
        ws.raw = raw;
        ws.m_table = m;
        ws.k_table = k;
        ws.xi_table = std::move(xi);
    }
    return series;
}

HighPercentileTerms high_percentile_terms(const SeverityModel& sev, const FrequencyModel& freq,
                                          double alpha) {
    HighPercentileTerms out;
    out.q0 = q0_random(sev, freq, alpha);
    const double x = out.q0;
    const auto mu = sev.censored_moments(x, 2);
    const double h = sev.log_cdf_derivs(x, 1)[1];
    const double g = sev.log_pdf_derivs(x, 1)[1];

    const double mu1 = mu.mu[1], mu2 = mu.mu[2];
    const double dmu1 = h * (x - mu1);
    const double dmu2 = h * (x * x - mu2);
    const double var = mu2 - mu1 * mu1;
    const double dvar = dmu2 - 2.0 * mu1 * dmu1;

    const double nu1 = freq.moment(1), nu2 = freq.moment(2), nu3 = freq.moment(3);
    const double r21 = nu2 / nu1;
    out.q1 = (r21 - 1.0) * mu1;
    out.q2 = -(r21 - 1.0) * (g * var + dvar) +
             (r21 * r21 - nu3 / nu1) * (g * mu1 * mu1 + 2.0 * mu1 * dmu1);
    return out;
}

} // namespace tailsum
