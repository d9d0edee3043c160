#pragma once

#include <span>
#include <vector>

#include "vise/environments.hpp"

namespace vise::voting {

/// alpha-majority rule: a proposal passes iff the number of strictly
/// positive components exceeds alpha * n, i.e. reaches n0 + 1 where
/// n0 = floor(alpha * n). n0 = -1 accepts everything, n0 = n rejects
/// everything.
class VotingRule {
 public:
  /// Throws vise::ParameterError unless n >= 1 and -1/n <= alpha <= 1.
  VotingRule(int n, double alpha);
  /// Rule with a given absolute threshold n0 in {-1, ..., n}; alpha = n0 / n.
  static VotingRule from_absolute(int n, int n0);

  int n() const noexcept { return n_; }
  double alpha() const noexcept { return alpha_; }
  int n0() const noexcept { return n0_; }

  bool accepts(int positive_count) const noexcept { return positive_count > n0_; }

 private:
  VotingRule(int n, double alpha, int n0) : n_(n), alpha_(alpha), n0_(n0) {}
  int n_;
  double alpha_;
  int n0_;
};

/// floor(alpha * n), with products within 1e-9 of an integer snapped to it
/// so that thresholds written as fractions (11/21) land on the intended n0.
int absolute_threshold(int n, double alpha);

/// 1 when the proposal passes under the rule, 0 otherwise. Throws
/// vise::ParameterError when proposal.size() != rule.n().
int indicator(std::span<const double> proposal, const VotingRule& rule);

/// E(eta) as the binomial sum over accepted positive counts x = n0+1..n,
/// accumulated in log space with compensated summation. n0 = -1 gives mu,
/// n0 = n gives 0. Throws vise::ParameterError for n0 outside {-1..n}.
double expected_increment_sum(const env::EnvironmentStats& s, int n, int n0);

/// E(eta) at n0 = 0: mu + E- q^n.
double expected_increment_zero_threshold(const env::EnvironmentStats& s, int n);

/// E(eta) = p (E+ + E-) B(p | n0, n - n0) - E- B(p | n0 + 1, n - n0), with
/// B(. | m, l) the Beta CDF. Defined for 1 <= n0 <= n - 1 only.
double expected_increment_beta(const env::EnvironmentStats& s, int n, int n0);

/// E(eta) = mu I_p(n0, n - n0) + E- p^n0 q^(n-n0) / (n0 B(n0, n - n0)).
/// Defined for 1 <= n0 <= n - 1 only.
double expected_increment_incomplete_beta(const env::EnvironmentStats& s, int n, int n0);

/// E(eta) for any n0 in {-1..n}: the Beta form on the interior, the exact
/// short-circuit values (mu, zero-threshold form, 0) on the edges.
double expected_increment(const env::EnvironmentStats& s, int n, int n0);

enum class Degeneracy {
  none,
  reject_all,  // p = 0: no proposal can help anyone
  accept_all,  // p = 1: every proposal is a pure gain
};

struct OptimalThreshold {
  double alpha0 = 0.5;
  Degeneracy degeneracy = Degeneracy::none;
};

/// alpha0 = (1 + E+/E-)^-1 = E- / (E+ + E-). For p = 0 reports
/// {1, reject_all}; for p = 1 reports {0, accept_all}.
OptimalThreshold optimal_threshold_general(const env::EnvironmentStats& s);

/// R = E+ / E-. Throws vise::DomainError when E- is zero.
double win_loss_ratio(const env::EnvironmentStats& s);

// Closed forms of alpha0 as functions of the adjusted mean rho = mu / sigma.
// sign(0) is taken as 0, so the signed forms give 1/2 at rho = 0.
double uniform_alpha0(double rho) noexcept;
double normal_alpha0(double rho) noexcept;
double pareto_alpha0(double rho, double k);
double laplace_alpha0(double rho) noexcept;

/// Dispatches to the family's closed form.
double optimal_threshold_closed_form(const env::DistributionSpec& spec);

/// d alpha0 / d rho for the Laplace family.
double laplace_alpha0_derivative(double rho) noexcept;

/// The set of optimal relative thresholds at finite n: every alpha in
/// [interval_lo, interval_hi) maps to n0_star.
struct ThresholdLadder {
  int n = 1;
  int n0_star = 0;
  double interval_lo = 0.0;
  double interval_hi = 0.0;
  double center = 0.0;
  Degeneracy degeneracy = Degeneracy::none;
};

/// n0_star maximizes expected_increment_sum over n0 in {-1..n}. It is built
/// directly: the sum's terms are positive exactly when x/n > alpha0, so
/// n0_star + 1 is the first such x. Ties (a zero term at x/n == alpha0)
/// resolve to the smaller n0.
ThresholdLadder optimal_absolute_threshold(const env::EnvironmentStats& s, int n);

struct Alpha0Point {
  double rho;
  double alpha0;
};

struct LadderPoint {
  double rho;
  double center;
};

struct ExpectationPoint {
  double mu;
  double rho;
  double e_eta;
};

/// Closed-form alpha0 along the sweep; the uniform family follows its
/// piecewise-linear form outside the two-sided range as well.
std::vector<Alpha0Point> alpha0_curve(const env::FamilySweep& sweep,
                                      std::span<const double> rho_grid);

/// Ladder centers along the sweep.
std::vector<LadderPoint> ladder_curve(const env::FamilySweep& sweep, int n,
                                      std::span<const double> rho_grid);

/// E(eta) along a grid of means with a fixed relative threshold alpha.
std::vector<ExpectationPoint> expectation_curve(const env::FamilySweep& sweep, int n, double alpha,
                                                std::span<const double> mu_grid);

/// E(eta) along a grid of means with the per-mean optimal threshold n0_star.
std::vector<ExpectationPoint> optimal_expectation_curve(const env::FamilySweep& sweep, int n,
                                                        std::span<const double> mu_grid);

/// Evenly spaced grid lo, lo + step, ..., up to hi (inclusive within
/// step * 1e-9). Throws vise::ParameterError unless step > 0 and lo <= hi.
std::vector<double> make_grid(double lo, double hi, double step);

}  // namespace vise::voting
