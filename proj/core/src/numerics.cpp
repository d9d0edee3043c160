#include "vise/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "vise/errors.hpp"

namespace vise::numerics {

namespace {

constexpr double kHalfLog2Pi = 0.91893853320467274178032973640562;

// lgamma(x) - [(x - 1/2) ln x - x + ln(2 pi) / 2]
double stirling_correction(double x) {
  if (x >= 15.0) {
    const double r = 1.0 / x;
    const double r2 = r * r;
    return r * (1.0 / 12 - r2 * (1.0 / 360 - r2 * (1.0 / 1260 - r2 * (1.0 / 1680 - r2 / 1188))));
  }
  return std::lgamma(x) - ((x - 0.5) * std::log(x) - x + kHalfLog2Pi);
}

// ln[x^a y^b / B(a, b)] with y = 1 - x. The Stirling decomposition keeps
// the large a ln(..) and b ln(..) pieces from cancelling against lgamma.
double log_power_prefactor(double x, double y, double a, double b) {
  const double s = a + b;
  const double d = x * b - y * a;
  const double core = a * std::log1p(d / a) + b * std::log1p(-d / b);
  const double corr = stirling_correction(a) + stirling_correction(b) - stirling_correction(s);
  return core + 0.5 * std::log(a * b / s) - kHalfLog2Pi - corr;
}

// Modified Lentz evaluation of the continued fraction for I_x(a, b).
double incomplete_beta_fraction(double x, double a, double b) {
  constexpr double kTiny = 1e-300;
  constexpr double kEps = 1e-16;
  constexpr int kMaxIter = 20000;

  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::fabs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIter; ++m) {
    const double m2 = 2.0 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;

    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < kEps) return h;
  }
  throw ConvergenceError("incomplete beta continued fraction did not converge (a=" +
                         std::to_string(a) + ", b=" + std::to_string(b) + ")");
}

}  // namespace

Tolerance::Tolerance(double abs_tol, double rel_tol, int max_iter)
    : abs_tol_(abs_tol), rel_tol_(rel_tol), max_iter_(max_iter) {
  if (!(abs_tol > 0.0)) throw ParameterError("abs_tol must be positive");
  if (!(rel_tol > 0.0)) throw ParameterError("rel_tol must be positive");
  if (max_iter < 1) throw ParameterError("max_iter must be at least 1");
}

double std_normal_pdf(double x) noexcept {
  constexpr double kInvSqrt2Pi = 0.39894228040143267793994605993438;
  return kInvSqrt2Pi * std::exp(-0.5 * x * x);
}

double std_normal_cdf(double x) noexcept {
  return 0.5 * std::erfc(-x * std::numbers::sqrt2 * 0.5);
}

double log_binomial_coefficient(int n, int k) noexcept {
  if (n < 0 || k < 0 || k > n) return kNegInf;
  if (k == 0 || k == n) return 0.0;
  return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

double log_beta_function(double a, double b) {
  if (!(a > 0.0) || !(b > 0.0)) throw DomainError("log_beta_function requires a > 0 and b > 0");
  if (a < 15.0 && b < 15.0) return std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b);
  const double s = a + b;
  return kHalfLog2Pi + (a - 0.5) * std::log(a / s) + b * std::log(b / s) - 0.5 * std::log(b) +
         stirling_correction(a) + stirling_correction(b) - stirling_correction(s);
}

double regularized_incomplete_beta(double x, double a, double b) {
  if (!(x >= 0.0 && x <= 1.0)) throw DomainError("regularized_incomplete_beta requires 0 <= x <= 1");
  if (!(a > 0.0) || !(b > 0.0))
    throw DomainError("regularized_incomplete_beta requires a > 0 and b > 0");
  if (x == 0.0) return 0.0;
  if (x == 1.0) return 1.0;

  const double y = 1.0 - x;
  if (x < (a + 1.0) / (a + b + 2.0)) {
    const double front = std::exp(log_power_prefactor(x, y, a, b)) / a;
    return std::clamp(front * incomplete_beta_fraction(x, a, b), 0.0, 1.0);
  }
  const double front = std::exp(log_power_prefactor(y, x, b, a)) / b;
  return std::clamp(1.0 - front * incomplete_beta_fraction(y, b, a), 0.0, 1.0);
}

double binomial_upper_tail(int n, double p, int k) {
  if (!(p >= 0.0 && p <= 1.0)) throw DomainError("binomial_upper_tail requires 0 <= p <= 1");
  if (n < 1) throw DomainError("binomial_upper_tail requires n >= 1");
  if (k < 0) return 1.0;
  if (k >= n) return 0.0;
  // G_n(k) = I_p(k + 1, n - k)
  return regularized_incomplete_beta(p, k + 1.0, static_cast<double>(n - k));
}

double adaptive_quadrature(const std::function<double(double)>& f, double lo, double hi,
                           const Tolerance& tol) {
  if (std::isnan(lo) || std::isnan(hi) || !(lo < hi))
    throw DomainError("adaptive_quadrature requires lo < hi");
  const unsigned depth = static_cast<unsigned>(std::min(tol.max_iter(), 25));
  double error = 0.0;
  double l1 = 0.0;
  const double value = boost::math::quadrature::gauss_kronrod<double, 15>::integrate(
      f, lo, hi, depth, tol.rel_tol(), &error, &l1);
  if (!std::isfinite(value) || error > std::max(tol.abs_tol(), tol.rel_tol() * l1)) {
    throw ConvergenceError("adaptive_quadrature: error estimate " + std::to_string(error) +
                           " above tolerance");
  }
  return value;
}

void CompensatedSum::add(double v) noexcept {
  const double t = sum_ + v;
  if (std::fabs(sum_) >= std::fabs(v)) {
    compensation_ += (sum_ - t) + v;
  } else {
    compensation_ += (v - t) + sum_;
  }
  sum_ = t;
}

}  // namespace vise::numerics
