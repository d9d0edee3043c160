#pragma once

#include <optional>
#include <string_view>
#include <variant>

#include "vise/rng.hpp"

namespace vise::env {

enum class Family { uniform, normal, symmetrized_pareto, laplace };

/// Continuous uniform proposals on [-a, b].
struct Uniform {
  double a = 1.0;
  double b = 1.0;
};

struct Normal {
  double mu = 0.0;
  double sigma = 1.0;
};

/// Two-sided Pareto density (k / 2s) (|x - mu| / s + 1)^-(k+1) with scale
/// s = C(k) * sigma, so that sigma is the standard deviation.
struct SymmetrizedPareto {
  double k = 8.0;
  double mu = 0.0;
  double sigma = 1.0;
};

/// Laplace density (lambda / 2) exp(-lambda |x - mu|); sigma = sqrt(2) / lambda.
struct Laplace {
  double mu = 0.0;
  double lambda = 1.0;
};

using DistributionSpec = std::variant<Uniform, Normal, SymmetrizedPareto, Laplace>;

Family family_of(const DistributionSpec& spec) noexcept;
std::string_view family_name(Family family) noexcept;
/// Accepts "uniform", "normal", "pareto", "symmetrized_pareto", "laplace".
std::optional<Family> parse_family(std::string_view name) noexcept;

/// Returns spec unchanged when every parameter constraint holds; otherwise
/// throws vise::ParameterError naming the violated constraint.
const DistributionSpec& validate(const DistributionSpec& spec);

/// C = sqrt((k - 1)(k - 2) / 2), the ratio of the Pareto scale to sigma.
double pareto_scale_constant(double k);

/// Summary of one proposal environment.
struct EnvironmentStats {
  double mu = 0.0;
  double sigma = 0.0;
  double rho = 0.0;      // mu / sigma
  double p = 0.0;        // P{zeta > 0}
  double q = 0.0;        // P{zeta <= 0}
  double e_plus = 0.0;   // E(zeta | zeta > 0)
  double e_minus = 0.0;  // |E(zeta | zeta <= 0)|
  std::optional<double> c_const;  // symmetrized Pareto only
  std::optional<double> rho_hat;  // |rho / C|, symmetrized Pareto only

  /// R = E+ / E-. Throws vise::DomainError when E- is zero.
  double win_loss_ratio() const;
};

/// Closed-form environment statistics for a validated spec.
EnvironmentStats stats(const DistributionSpec& spec);

double mean(const DistributionSpec& spec);
double std_dev(const DistributionSpec& spec);

double pdf(const DistributionSpec& spec, double x);
double cdf(const DistributionSpec& spec, double x);
/// Inverse of cdf. Throws vise::DomainError for u outside (0, 1), except
/// that the uniform family also accepts the endpoints.
double quantile(const DistributionSpec& spec, double u);

/// One inverse-CDF draw; consumes exactly one variate from the stream.
double sample(const DistributionSpec& spec, mc::RngStream& stream);

/// Inverse-CDF sampler bound to one spec, validated once. Produces exactly
/// the values of quantile() and sample().
class Sampler {
 public:
  explicit Sampler(const DistributionSpec& spec);

  double quantile_at(double u) const;
  double operator()(mc::RngStream& stream) const { return quantile_at(stream.next_uniform()); }

 private:
  DistributionSpec spec_;
  double scale_ = 0.0;  // Pareto scale C * sigma
};

/// Q1 with cdf(Q1) = 1/4.
double first_quartile(const DistributionSpec& spec);

/// Zero-mean spec of `family` whose first quartile equals `q1_offset`
/// (negative). `k` is the Pareto shape and is ignored for other families.
DistributionSpec standardize_by_quartile(Family family, double q1_offset, double k = 8.0);

/// One-parameter family of environments swept over the mean with the shape
/// held fixed: sigma for normal, Pareto and Laplace; the support width
/// a + b = 2 sqrt(3) sigma for uniform.
struct FamilySweep {
  Family family = Family::normal;
  double sigma = 1.0;
  double k = 8.0;

  /// nullopt when the uniform support no longer straddles zero.
  std::optional<DistributionSpec> spec_at_mean(double mu) const;
  /// Like stats(spec_at_mean(mu)), extended to the one-sided uniform case
  /// (p = 1 or p = 0) by its limit values.
  EnvironmentStats stats_at_mean(double mu) const;
};

}  // namespace vise::env
