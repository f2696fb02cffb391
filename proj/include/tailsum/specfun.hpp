#pragma once

// Special functions used by the severity models and the exact Levy quantile.
// Everything here is a pure function with no global state.

namespace tailsum::specfun {

inline constexpr double pi = 3.14159265358979323846;
inline constexpr double sqrt_pi = 1.77245385090551602730;
inline constexpr double sqrt2 = 1.41421356237309504880;

double erf(double x);
double erfc(double x);

/// Inverse of erf on (-1, 1). Accurate to a few ulp including |x| -> 0.
double erf_inv(double x);

/// Inverse of erfc on (0, 2). Stays accurate for arguments down to the
/// smallest normal double.
double erfc_inv(double y);

double gamma_fn(double x);
double log_gamma(double x);

/// 1/Gamma(x); zero at the poles of Gamma.
double reciprocal_gamma(double x);

double normal_pdf(double x);
double normal_cdf(double x);

/// log Phi(x), accurate deep into the lower tail where Phi underflows.
double log_normal_cdf(double x);

/// Standard normal quantile (Wichura's AS241 rational approximation).
double normal_quantile(double p);

} // namespace tailsum::specfun
