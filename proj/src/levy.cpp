#include "tailsum/levy.hpp"

#include "tailsum/errors.hpp"
#include "tailsum/specfun.hpp"

namespace tailsum::levy {

namespace {

void require_valid(const LevyExact& le) {
    if (!(le.c > 0.0) || le.n < 1)
        throw DomainError("Levy sum requires c > 0 and n >= 1");
}

} // namespace

double exact_quantile(const LevyExact& le, double alpha) {
    require_valid(le);
    if (!(alpha > 0.0 && alpha < 1.0))
        throw DomainError("quantile level must lie in (0, 1)");
    const double y = specfun::erf_inv(1.0 - alpha);
    const double n = le.n;
    return le.c * n * n / (2.0 * y * y);
}

GammaCoefficients gamma_coefficients(int n) {
    if (n < 1)
        throw DomainError("number of terms must be positive");
    const double N = n, N2 = N * N, pi = specfun::pi;
    GammaCoefficients g;
    g.gamma1 = ((2.0 * pi - 5.0) * N2 - 6.0 * (pi - 3.0) * N + (4.0 * pi - 13.0)) / (12.0 * N2);
    g.gamma2 = (N - 1.0) * (N - 2.0) * (pi - 3.0) / (6.0 * N2);
    g.gamma3 = (N - 1.0) * (N - 2.0) * (pi - 16.0 / 5.0) / (6.0 * N2);
    return g;
}

double ow_error_coefficient(int n) {
    if (n < 1)
        throw DomainError("number of terms must be positive");
    const double N2 = static_cast<double>(n) * n;
    return specfun::pi / 6.0 * (N2 - 1.0) / N2;
}

CoefficientAsymptotics coefficient_asymptotics(const LevyExact& le, double delta) {
    require_valid(le);
    if (!(delta > 0.0 && delta < 1.0))
        throw DomainError("delta must lie in (0, 1)");
    const double N = le.n, N2 = N * N, pi = specfun::pi;
    const double pref = 2.0 * N2 * le.c / pi;
    CoefficientAsymptotics out;
    out.q0 = pref * (1.0 / (delta * delta) - (N - 1.0) / (N * delta) +
                     ((N - 1.0) * (N - 5.0) - 2.0 * pi) / (12.0 * N2));
    out.q1 = pref * ((N - 1.0) / (N * delta) - (N - 1.0) * (N + pi - 3.0) / (2.0 * N2));
    out.q2 = pref * (-(N - 1.0) * (N + 1.0) / (6.0 * N2));
    out.q3 = pref * (-(N - 1.0) * (N - 2.0) / (5.0 * N2));
    return out;
}

} // namespace tailsum::levy
