#pragma once

#include "tailsum/frequency.hpp"
#include "tailsum/severity.hpp"

#include <optional>
#include <string>

namespace tailsum {

enum class Method { sl, sl_mean, ow_implicit, ow_star, ow_inf_implicit, ow_inf_star, bm1, bm2, alb1, pert };

/// A method together with its order; the order is meaningful for PERT only.
struct MethodId {
    Method method = Method::sl;
    int order = 0;

    friend bool operator==(const MethodId&, const MethodId&) = default;
    friend auto operator<=>(const MethodId&, const MethodId&) = default;
};

/// "SL", "SL_mean", "OW_implicit", ..., "PERT(3)".
std::string method_name(MethodId id);
/// Inverse of method_name; "PERT" alone means PERT(3). Throws DomainError.
MethodId parse_method(const std::string& text);

struct SolverInfo {
    int iterations = 0;
    /// |alpha_implied - alpha| from re-evaluating the defining equation.
    double residual = 0.0;
};

struct ApproximationEstimate {
    MethodId method;
    double value = 0.0;
    std::optional<SolverInfo> solver;
};

enum class OwMode { implicit, star };

/// F^-1(1 - (1 - alpha) / E[N]).
double single_loss(const SeverityModel& sev, const FrequencyModel& freq, double alpha);
/// Q_SL + (E[N] - 1) mu_L. Requires a finite severity mean.
double mean_corrected(const SeverityModel& sev, const FrequencyModel& freq, double alpha);

/// Finite-mean second-order approximation. Implicit mode solves
///   1 - F(Q) = (1 - alpha) / nu_1 - (nu_2 / nu_1 - 1) mu_L f(Q);
/// star mode returns Q_SL + (nu_2 / nu_1 - 1) mu_L.
ApproximationEstimate ow_finite(const SeverityModel& sev, const FrequencyModel& freq, double alpha,
                                OwMode mode);

/// c_a for a tail index a in (0, 1]; c_1 = 1 and c_{1/2} = 0.
double ow_constant(double a);

/// mu_F(x) = int_0^x (1 - F(s)) ds = (1 - F(x)) x + F(x) E[L | L <= x].
double integrated_survival(const SeverityModel& sev, double x);

/// Infinite-mean counterpart with c_a (nu_2 / nu_1 - 1) mu_F(Q) f(Q).
/// Requires a regularly varying severity with tail index a <= 1.
ApproximationEstimate ow_infinite(const SeverityModel& sev, const FrequencyModel& freq,
                                  double alpha, OwMode mode);

/// Poisson only. m = 1: Q_SL + lambda mu_L. m = 2: root of
///   (1 - alpha) / lambda = E[1 - F(Q - lambda mu_L + sqrt(lambda mu_L^[2]) Z)], Z ~ N(0, 1).
ApproximationEstimate barbe_mccormick(const SeverityModel& sev, const FrequencyModel& freq,
                                      double alpha, int m);

/// The m = 2 kernel equation with the two severity moments supplied
/// explicitly (mu2 = 0 collapses the kernel to a point).
ApproximationEstimate barbe_mccormick2_kernel(const SeverityModel& sev, double lambda, double alpha,
                                              double mu1, double mu2);

/// Q_SL + (E[N(N-1)] / E[N]) mu_L.
double albrecher_m1(const SeverityModel& sev, const FrequencyModel& freq, double alpha);

/// Dispatches any method, including PERT(k).
ApproximationEstimate evaluate_method(MethodId id, const SeverityModel& sev,
                                      const FrequencyModel& freq, double alpha);

} // namespace tailsum
