#include "vise/voting.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "vise/errors.hpp"
#include "vise/numerics.hpp"

namespace vise::voting {

namespace {

constexpr double kSqrt3 = 1.7320508075688772935274463415059;

using numerics::log_beta_function;
using numerics::log_binomial_coefficient;
using numerics::regularized_incomplete_beta;

void check_threshold(int n, int n0, int lo, int hi, const char* what) {
  if (n < 1) throw ParameterError(std::string(what) + ": n must be at least 1");
  if (n0 < lo || n0 > hi) {
    throw ParameterError(std::string(what) + ": n0 = " + std::to_string(n0) + " outside {" +
                         std::to_string(lo) + ", ..., " + std::to_string(hi) + "}");
  }
}

double safe_log(double v) { return v > 0.0 ? std::log(v) : numerics::kNegInf; }

// x * log(v) with the convention 0 * log(0) = 0.
double scaled_log(int x, double log_v) { return x == 0 ? 0.0 : x * log_v; }

double signum(double v) { return static_cast<double>((v > 0.0) - (v < 0.0)); }

}  // namespace

int absolute_threshold(int n, double alpha) {
  const double scaled = alpha * n;
  const double nearest = std::round(scaled);
  if (std::fabs(scaled - nearest) <= 1e-9) return static_cast<int>(nearest);
  return static_cast<int>(std::floor(scaled));
}

VotingRule::VotingRule(int n, double alpha) : n_(n), alpha_(alpha), n0_(0) {
  if (n < 1) throw ParameterError("n must be at least 1");
  if (!std::isfinite(alpha)) throw ParameterError("alpha must be finite");
  n0_ = absolute_threshold(n, alpha);
  if (n0_ < -1 || n0_ > n) throw ParameterError("alpha must lie in [-1/n, 1]");
}

VotingRule VotingRule::from_absolute(int n, int n0) {
  check_threshold(n, n0, -1, n, "VotingRule");
  return VotingRule(n, static_cast<double>(n0) / n, n0);
}

int indicator(std::span<const double> proposal, const VotingRule& rule) {
  if (proposal.size() != static_cast<std::size_t>(rule.n())) {
    throw ParameterError("proposal length " + std::to_string(proposal.size()) +
                         " does not match society size " + std::to_string(rule.n()));
  }
  const auto positive = std::count_if(proposal.begin(), proposal.end(), [](double z) { return z > 0.0; });
  return rule.accepts(static_cast<int>(positive)) ? 1 : 0;
}

double expected_increment_sum(const env::EnvironmentStats& s, int n, int n0) {
  check_threshold(n, n0, -1, n, "expected_increment_sum");
  if (n0 == -1) return s.mu;
  const double log_p = safe_log(s.p);
  const double log_q = safe_log(s.q);
  const double spread = s.e_plus + s.e_minus;
  numerics::CompensatedSum total;
  for (int x = n0 + 1; x <= n; ++x) {
    const double log_weight = log_binomial_coefficient(n, x) + scaled_log(x, log_p) + scaled_log(n - x, log_q);
    if (log_weight == numerics::kNegInf) continue;
    const double coefficient = spread * x / n - s.e_minus;
    total.add(coefficient * std::exp(log_weight));
  }
  return total.value();
}

double expected_increment_zero_threshold(const env::EnvironmentStats& s, int n) {
  if (n < 1) throw ParameterError("expected_increment_zero_threshold: n must be at least 1");
  return s.mu + s.e_minus * std::pow(s.q, n);
}

double expected_increment_beta(const env::EnvironmentStats& s, int n, int n0) {
  check_threshold(n, n0, 1, n - 1, "expected_increment_beta");
  const double m = n - n0;
  return s.p * (s.e_plus + s.e_minus) * regularized_incomplete_beta(s.p, n0, m) -
         s.e_minus * regularized_incomplete_beta(s.p, n0 + 1.0, m);
}

double expected_increment_incomplete_beta(const env::EnvironmentStats& s, int n, int n0) {
  check_threshold(n, n0, 1, n - 1, "expected_increment_incomplete_beta");
  const int m = n - n0;
  const double log_density_term = scaled_log(n0, safe_log(s.p)) + scaled_log(m, safe_log(s.q)) -
                                  std::log(static_cast<double>(n0)) - log_beta_function(n0, m);
  return s.mu * regularized_incomplete_beta(s.p, n0, m) + s.e_minus * std::exp(log_density_term);
}

double expected_increment(const env::EnvironmentStats& s, int n, int n0) {
  check_threshold(n, n0, -1, n, "expected_increment");
  if (n0 == -1) return s.mu;
  if (n0 == n) return 0.0;
  if (n0 == 0) return expected_increment_zero_threshold(s, n);
  return expected_increment_beta(s, n, n0);
}

OptimalThreshold optimal_threshold_general(const env::EnvironmentStats& s) {
  if (!(s.p > 0.0)) return {1.0, Degeneracy::reject_all};
  if (!(s.q > 0.0)) return {0.0, Degeneracy::accept_all};
  return {s.e_minus / (s.e_plus + s.e_minus), Degeneracy::none};
}

double win_loss_ratio(const env::EnvironmentStats& s) { return s.win_loss_ratio(); }

double uniform_alpha0(double rho) noexcept {
  if (rho <= -kSqrt3) return 1.0;
  if (rho >= kSqrt3) return 0.0;
  return 0.5 * (1.0 - rho / kSqrt3);
}

double normal_alpha0(double rho) noexcept {
  return numerics::std_normal_cdf(rho) *
         (1.0 - rho * numerics::std_normal_cdf(-rho) / numerics::std_normal_pdf(rho));
}

double pareto_alpha0(double rho, double k) {
  const double c = env::pareto_scale_constant(k);
  const double r = std::fabs(rho) / c;
  return 0.5 * (1.0 + signum(rho) * (1.0 - (k - 2.0) * r - std::pow(1.0 + r, 1.0 - k)) / (1.0 + k * r));
}

double laplace_alpha0(double rho) noexcept {
  const double t = std::numbers::sqrt2 * std::fabs(rho);
  return 0.5 * (1.0 + signum(rho) * (1.0 - t - std::exp(-t)) / (1.0 + t));
}

double optimal_threshold_closed_form(const env::DistributionSpec& spec) {
  const double rho = env::mean(spec) / env::std_dev(spec);
  switch (env::family_of(spec)) {
    case env::Family::uniform:
      return uniform_alpha0(rho);
    case env::Family::normal:
      return normal_alpha0(rho);
    case env::Family::symmetrized_pareto:
      return pareto_alpha0(rho, std::get<env::SymmetrizedPareto>(spec).k);
    case env::Family::laplace:
      return laplace_alpha0(rho);
  }
  throw ParameterError("unsupported family");
}

double laplace_alpha0_derivative(double rho) noexcept {
  const double r = std::fabs(rho);
  const double denom = 1.0 + std::numbers::sqrt2 * r;
  return (std::exp(-std::numbers::sqrt2 * r) * (std::numbers::sqrt2 + r) - std::numbers::sqrt2) /
         (denom * denom);
}

ThresholdLadder optimal_absolute_threshold(const env::EnvironmentStats& s, int n) {
  if (n < 1) throw ParameterError("optimal_absolute_threshold: n must be at least 1");
  ThresholdLadder ladder;
  ladder.n = n;
  ladder.degeneracy = optimal_threshold_general(s).degeneracy;
  switch (ladder.degeneracy) {
    case Degeneracy::reject_all:
      ladder.n0_star = n;
      break;
    case Degeneracy::accept_all:
      ladder.n0_star = -1;
      break;
    case Degeneracy::none: {
      // Term x is negative iff x / n < alpha0. Comparing the two quotients
      // keeps exact ties (alpha0 = 1/2 at even n) as ties; zero terms are
      // kept, which is the smaller n0.
      const double alpha0 = s.e_minus / (s.e_plus + s.e_minus);
      int negative = 0;
      for (int x = 0; x <= n; ++x) {
        if (static_cast<double>(x) / n < alpha0) ++negative;
      }
      ladder.n0_star = negative - 1;
      break;
    }
  }
  ladder.interval_lo = static_cast<double>(ladder.n0_star) / n;
  ladder.interval_hi = static_cast<double>(ladder.n0_star + 1) / n;
  ladder.center = (ladder.n0_star + 0.5) / n;
  return ladder;
}

std::vector<Alpha0Point> alpha0_curve(const env::FamilySweep& sweep, std::span<const double> rho_grid) {
  std::vector<Alpha0Point> out;
  out.reserve(rho_grid.size());
  for (const double rho : rho_grid) {
    double alpha0 = 0.0;
    if (sweep.family == env::Family::uniform) {
      alpha0 = uniform_alpha0(rho);
    } else {
      alpha0 = optimal_threshold_closed_form(*sweep.spec_at_mean(rho * sweep.sigma));
    }
    out.push_back({rho, alpha0});
  }
  return out;
}

std::vector<LadderPoint> ladder_curve(const env::FamilySweep& sweep, int n, std::span<const double> rho_grid) {
  std::vector<LadderPoint> out;
  out.reserve(rho_grid.size());
  for (const double rho : rho_grid) {
    const auto ladder = optimal_absolute_threshold(sweep.stats_at_mean(rho * sweep.sigma), n);
    out.push_back({rho, ladder.center});
  }
  return out;
}

std::vector<ExpectationPoint> expectation_curve(const env::FamilySweep& sweep, int n, double alpha,
                                                std::span<const double> mu_grid) {
  const VotingRule rule(n, alpha);
  std::vector<ExpectationPoint> out;
  out.reserve(mu_grid.size());
  for (const double mu : mu_grid) {
    const auto s = sweep.stats_at_mean(mu);
    out.push_back({mu, mu / sweep.sigma, expected_increment(s, n, rule.n0())});
  }
  return out;
}

std::vector<ExpectationPoint> optimal_expectation_curve(const env::FamilySweep& sweep, int n,
                                                        std::span<const double> mu_grid) {
  std::vector<ExpectationPoint> out;
  out.reserve(mu_grid.size());
  for (const double mu : mu_grid) {
    const auto s = sweep.stats_at_mean(mu);
    const auto ladder = optimal_absolute_threshold(s, n);
    out.push_back({mu, mu / sweep.sigma, expected_increment(s, n, ladder.n0_star)});
  }
  return out;
}

std::vector<double> make_grid(double lo, double hi, double step) {
  if (!(std::isfinite(lo) && std::isfinite(hi))) throw ParameterError("grid bounds must be finite");
  if (!(step > 0.0) || !std::isfinite(step)) throw ParameterError("grid step must be positive");
  if (!(lo <= hi)) throw ParameterError("grid requires lo <= hi");
  const auto count = static_cast<std::size_t>(std::floor((hi - lo) / step + 1e-9)) + 1;
  std::vector<double> grid(count);
  for (std::size_t i = 0; i < count; ++i) {
    // Snap to 1e-12 so printed grids read 0.1, not 0.10000000000000001.
    grid[i] = std::round((lo + static_cast<double>(i) * step) * 1e12) / 1e12 + 0.0;
  }
  return grid;
}

}  // namespace vise::voting
