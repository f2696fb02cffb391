#include "tailsum/pareto_asymptotics.hpp"

#include "tailsum/errors.hpp"
#include "tailsum/perturbative.hpp"
#include "tailsum/severity.hpp"

#include <cmath>

namespace tailsum::pareto {

double LeadingTerms::evaluate(int k, double delta) const {
    if (k < 1 || k > 3)
        throw DomainError("leading terms are tabulated for k = 1, 2, 3");
    const auto& t = terms[k - 1];
    const double x = delta / n;
    return (n - 1.0) * (t.a_coeff * std::pow(x, 1.0 - 1.0 / a) + t.b_coeff * std::pow(x, t.b_exponent));
}

LeadingTerms leading_terms(double a, int n) {
    if (!(a > 0.0) || !std::isfinite(a))
        throw DomainError("tail index must be positive");
    if (std::fabs(a - std::round(a)) < 1e-12 || std::fabs(a - 0.5) < 1e-12)
        throw DomainError("leading terms have poles at integer a and a = 1/2");
    if (n < 1)
        throw DomainError("number of terms must be positive");

    LeadingTerms lt;
    lt.a = a;
    lt.n = n;
    const double am1 = a - 1.0, am2 = a - 2.0, am3 = a - 3.0;
    lt.terms[0] = {-a / am1, a / am1, 0.0};
    // The (delta/n)^{1/a} coefficient of Q_2 is taken with a plus sign; that
    // is the sign the recursion produces (see the engine-agreement tests).
    lt.terms[1] = {-a * (2.0 * a - 1.0) / am2, a * (a + 1.0) / (am1 * am1 * am2), 1.0 / a};
    lt.terms[2] = {-2.0 * a * am1 * (2.0 * a - 1.0) / am3,
                   2.0 * a * (a + 1.0) * (a + 1.0) * (a + 2.0) / (am1 * am1 * am1 * am2 * am3),
                   2.0 / a};
    return lt;
}

ScalingFit fit_q2_over_q1(double a, int n, double delta_lo, double delta_hi, int points) {
    if (points < 2 || !(delta_lo > 0.0 && delta_lo < delta_hi && delta_hi < 1.0))
        throw DomainError("scaling fit needs at least two points in 0 < delta_lo < delta_hi < 1");
    const auto sev = SeverityModel::pareto(a);
    ScalingFit fit;
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    const double step = std::log(delta_hi / delta_lo) / (points - 1);
    for (int i = 0; i < points; ++i) {
        const double delta = delta_lo * std::exp(step * i);
        const auto s = terms_deterministic(sev, n, 1.0 - delta, 2);
        const double r = std::fabs(s.coeffs[2] / s.coeffs[1]);
        fit.deltas.push_back(delta);
        fit.ratios.push_back(r);
        const double x = std::log(delta), y = std::log(r);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double m = points;
    fit.slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
    fit.intercept = (sy - fit.slope * sx) / m;
    return fit;
}

} // namespace tailsum::pareto
