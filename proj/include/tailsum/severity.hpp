#pragma once

#include <optional>
#include <string>
#include <vector>

namespace tailsum {

enum class SeverityKind { levy, lognormal, pareto };

/// Highest derivative / censored-moment order a severity model will evaluate.
inline constexpr int max_derivative_order = 13;

/// Right-censored raw moments mu_j(x) = E[L^j | L <= x]. `mu[j]` holds order j,
/// with mu[0] = 1.
struct CensoredMomentTable {
    double threshold = 0.0;
    std::vector<double> mu;

    int order() const { return static_cast<int>(mu.size()) - 1; }
};

/// Positive continuous severity distribution.
///
///   levy(c):          F(x) = erfc(sqrt(c / 2x)),                 x > 0
///   lognormal(sigma): F(x) = Phi(log(x) / sigma),                x > 0
///   pareto(a):        F(x) = 1 - x^-a,                           x > 1
///
/// Immutable after construction. Derivative vectors are indexed by order:
/// element j holds the j-th derivative (element 0 is the function itself).
class SeverityModel {
public:
    static SeverityModel levy(double c);
    static SeverityModel lognormal(double sigma);
    static SeverityModel pareto(double a);

    SeverityKind kind() const { return kind_; }
    double parameter() const { return param_; }
    std::string name() const;
    std::string params() const;

    double support_min() const { return kind_ == SeverityKind::pareto ? 1.0 : 0.0; }

    double cdf(double x) const;
    double survival(double x) const;
    double pdf(double x) const;

    /// F^-1(p) for p in (0, 1).
    double quantile(double p) const;
    /// F^-1(1 - s), evaluated without forming 1 - s.
    double quantile_survival(double s) const;

    /// d^j/dx^j log f(x) for j = 0..order.
    std::vector<double> log_pdf_derivs(double x, int order) const;
    /// d^j/dx^j f(x) for j = 0..order (Faa di Bruno over log_pdf_derivs).
    std::vector<double> pdf_derivs(double x, int order) const;
    /// d^j/dx^j log F(x) for j = 0..order.
    std::vector<double> log_cdf_derivs(double x, int order) const;

    /// mu_j(x) for j = 0..order. Finite for every order regardless of the tail.
    CensoredMomentTable censored_moments(double x, int order) const;

    /// E[L^j] if finite.
    std::optional<double> raw_moment(int j) const;
    std::optional<double> mean() const { return raw_moment(1); }

    /// Index a of regular variation of the density, f in RV_-(1+a).
    /// Lognormal has no such index.
    std::optional<double> tail_index() const;

private:
    SeverityModel(SeverityKind kind, double param) : kind_(kind), param_(param) {}

    void require_interior(double x, const char* who) const;

    SeverityKind kind_;
    double param_;
};

/// kappa_j = mu_j - sum_{i=1}^{j-1} C(j-1, i) kappa_{j-i} mu_i for j = 1..order.
/// Element 0 is zero.
std::vector<double> censored_cumulants(const CensoredMomentTable& mu, int order);

} // namespace tailsum
