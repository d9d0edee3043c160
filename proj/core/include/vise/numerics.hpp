#pragma once

#include <functional>
#include <limits>

namespace vise::numerics {

/// Accuracy request for iterative routines.
class Tolerance {
 public:
  Tolerance() = default;
  /// Throws vise::ParameterError unless abs_tol > 0, rel_tol > 0, max_iter >= 1.
  Tolerance(double abs_tol, double rel_tol, int max_iter);

  double abs_tol() const noexcept { return abs_tol_; }
  double rel_tol() const noexcept { return rel_tol_; }
  int max_iter() const noexcept { return max_iter_; }

 private:
  double abs_tol_ = 1e-12;
  double rel_tol_ = 1e-10;
  int max_iter_ = 200;
};

inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double std_normal_pdf(double x) noexcept;
double std_normal_cdf(double x) noexcept;

/// ln C(n, k); kNegInf when k is outside [0, n].
double log_binomial_coefficient(int n, int k) noexcept;

/// ln B(a, b). Throws vise::DomainError unless a > 0 and b > 0.
double log_beta_function(double a, double b);

/// I_x(a, b), the regularized incomplete beta function (the Beta(a, b) CDF).
///
/// Evaluated by the Lentz continued fraction on whichever tail converges
/// fast, switching to 1 - I_{1-x}(b, a) for x > (a + 1) / (a + b + 2). The
/// power prefactor x^a (1-x)^b / B(a, b) is formed from Stirling-corrected
/// terms so that large a, b keep full relative accuracy.
///
/// Throws vise::DomainError for x outside [0, 1] or a, b <= 0, and
/// vise::ConvergenceError if the continued fraction stalls.
double regularized_incomplete_beta(double x, double a, double b);

/// G_n(k) = P(Y > k) for Y ~ Bin(n, p). Equal to 1 for k < 0 and 0 for k >= n.
double binomial_upper_tail(int n, double p, int k);

/// Integral of f over (lo, hi); either endpoint may be infinite.
/// Throws vise::ConvergenceError when the error estimate stays above
/// max(abs_tol, rel_tol * |result|).
double adaptive_quadrature(const std::function<double(double)>& f, double lo, double hi,
                           const Tolerance& tol = Tolerance{});

/// Neumaier-compensated running sum.
class CompensatedSum {
 public:
  void add(double v) noexcept;
  double value() const noexcept { return sum_ + compensation_; }

 private:
  double sum_ = 0.0;
  double compensation_ = 0.0;
};

}  // namespace vise::numerics
