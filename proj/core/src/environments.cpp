#include "vise/environments.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include <boost/math/special_functions/erf.hpp>

#include "vise/errors.hpp"
#include "vise/numerics.hpp"

namespace vise::env {

namespace {

using numerics::std_normal_cdf;
using numerics::std_normal_pdf;

constexpr double kSqrt3 = 1.7320508075688772935274463415059;

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

void require(bool ok, const char* message) {
  if (!ok) throw ParameterError(message);
}

double pareto_scale(const SymmetrizedPareto& d) { return pareto_scale_constant(d.k) * d.sigma; }

// Standard normal quantile.
double std_normal_quantile(double u) {
  return -std::numbers::sqrt2 * boost::math::erfc_inv(2.0 * u);
}

void require_open_unit(double u) {
  if (!(u > 0.0 && u < 1.0)) throw DomainError("quantile requires 0 < u < 1 for unbounded support");
}

}  // namespace

Family family_of(const DistributionSpec& spec) noexcept {
  return static_cast<Family>(spec.index());
}

std::string_view family_name(Family family) noexcept {
  switch (family) {
    case Family::uniform:
      return "uniform";
    case Family::normal:
      return "normal";
    case Family::symmetrized_pareto:
      return "pareto";
    case Family::laplace:
      return "laplace";
  }
  return "unknown";
}

std::optional<Family> parse_family(std::string_view name) noexcept {
  if (name == "uniform") return Family::uniform;
  if (name == "normal") return Family::normal;
  if (name == "pareto" || name == "symmetrized_pareto") return Family::symmetrized_pareto;
  if (name == "laplace") return Family::laplace;
  return std::nullopt;
}

const DistributionSpec& validate(const DistributionSpec& spec) {
  std::visit(Overloaded{
                 [](const Uniform& d) {
                   require(std::isfinite(d.a) && d.a > 0.0, "a must be positive and finite");
                   require(std::isfinite(d.b) && d.b > 0.0, "b must be positive and finite");
                 },
                 [](const Normal& d) {
                   require(std::isfinite(d.mu), "mu must be finite");
                   require(std::isfinite(d.sigma) && d.sigma > 0.0,
                           "sigma must be positive and finite");
                 },
                 [](const SymmetrizedPareto& d) {
                   require(std::isfinite(d.k) && d.k > 2.0, "k must exceed 2");
                   require(std::isfinite(d.mu), "mu must be finite");
                   require(std::isfinite(d.sigma) && d.sigma > 0.0,
                           "sigma must be positive and finite");
                 },
                 [](const Laplace& d) {
                   require(std::isfinite(d.mu), "mu must be finite");
                   require(std::isfinite(d.lambda) && d.lambda > 0.0,
                           "lambda must be positive and finite");
                 },
             },
             spec);
  return spec;
}

double pareto_scale_constant(double k) {
  if (!(k > 2.0)) throw ParameterError("k must exceed 2");
  return std::sqrt((k - 1.0) * (k - 2.0) / 2.0);
}

double EnvironmentStats::win_loss_ratio() const {
  if (!(e_minus > 0.0)) throw DomainError("win/loss ratio undefined: E- is zero");
  return e_plus / e_minus;
}

double mean(const DistributionSpec& spec) {
  return std::visit(Overloaded{
                        [](const Uniform& d) { return 0.5 * (d.b - d.a); },
                        [](const Normal& d) { return d.mu; },
                        [](const SymmetrizedPareto& d) { return d.mu; },
                        [](const Laplace& d) { return d.mu; },
                    },
                    validate(spec));
}

double std_dev(const DistributionSpec& spec) {
  return std::visit(Overloaded{
                        [](const Uniform& d) { return (d.a + d.b) / (2.0 * kSqrt3); },
                        [](const Normal& d) { return d.sigma; },
                        [](const SymmetrizedPareto& d) { return d.sigma; },
                        [](const Laplace& d) { return std::numbers::sqrt2 / d.lambda; },
                    },
                    validate(spec));
}

EnvironmentStats stats(const DistributionSpec& spec) {
  validate(spec);
  EnvironmentStats s;
  s.mu = mean(spec);
  s.sigma = std_dev(spec);
  s.rho = s.mu / s.sigma;

  std::visit(
      Overloaded{
          [&](const Uniform& d) {
            s.p = d.b / (d.a + d.b);
            s.q = 1.0 - s.p;
            if (d.a < d.b) {
              s.q = d.a / (d.a + d.b);
              s.p = 1.0 - s.q;
            }
            s.e_plus = 0.5 * d.b;
            s.e_minus = 0.5 * d.a;
          },
          [&](const Normal& d) {
            const double rho = s.rho;
            const double upper = std_normal_cdf(rho);   // P{zeta > 0}
            const double lower = std_normal_cdf(-rho);  // P{zeta <= 0}
            if (rho >= 0.0) {
              s.q = lower;
              s.p = 1.0 - lower;
            } else {
              s.p = upper;
              s.q = 1.0 - upper;
            }
            const double density = std_normal_pdf(rho);
            s.e_plus = d.mu + d.sigma * density / upper;
            s.e_minus = -d.mu + d.sigma * density / lower;
          },
          [&](const SymmetrizedPareto& d) {
            const double c = pareto_scale_constant(d.k);
            const double rho = s.rho;
            s.c_const = c;
            s.rho_hat = std::fabs(rho / c);
            if (d.mu > 0.0) {
              s.q = 0.5 * std::pow(c / (c + rho), d.k);
              s.p = 1.0 - s.q;
              s.e_minus = d.sigma * (c + rho) / (d.k - 1.0);
              s.e_plus = d.sigma / s.p * (rho + s.q * (c + rho) / (d.k - 1.0));
            } else {
              s.p = 0.5 * std::pow(c / (c - rho), d.k);
              s.q = 1.0 - s.p;
              s.e_plus = d.sigma * (c - rho) / (d.k - 1.0);
              s.e_minus = -d.sigma / s.q * (rho - s.p * (c - rho) / (d.k - 1.0));
            }
          },
          [&](const Laplace& d) {
            const double l = d.lambda;
            if (d.mu > 0.0) {
              const double tail = std::exp(-l * d.mu);
              s.q = 0.5 * tail;
              s.p = 1.0 - s.q;
              s.e_minus = 1.0 / l;
              s.e_plus = (d.mu + tail / (2.0 * l)) / s.p;
            } else {
              const double tail = std::exp(l * d.mu);
              s.p = 0.5 * tail;
              s.q = 1.0 - s.p;
              s.e_plus = 1.0 / l;
              s.e_minus = -(d.mu - tail / (2.0 * l)) / s.q;
            }
          },
      },
      spec);
  return s;
}

double pdf(const DistributionSpec& spec, double x) {
  return std::visit(Overloaded{
                        [x](const Uniform& d) {
                          return (x >= -d.a && x <= d.b) ? 1.0 / (d.a + d.b) : 0.0;
                        },
                        [x](const Normal& d) { return std_normal_pdf((x - d.mu) / d.sigma) / d.sigma; },
                        [x](const SymmetrizedPareto& d) {
                          const double s = pareto_scale(d);
                          return d.k / (2.0 * s) * std::pow(std::fabs(x - d.mu) / s + 1.0, -(d.k + 1.0));
                        },
                        [x](const Laplace& d) {
                          return 0.5 * d.lambda * std::exp(-d.lambda * std::fabs(x - d.mu));
                        },
                    },
                    validate(spec));
}

double cdf(const DistributionSpec& spec, double x) {
  return std::visit(Overloaded{
                        [x](const Uniform& d) {
                          if (x <= -d.a) return 0.0;
                          if (x >= d.b) return 1.0;
                          return (x + d.a) / (d.a + d.b);
                        },
                        [x](const Normal& d) { return std_normal_cdf((x - d.mu) / d.sigma); },
                        [x](const SymmetrizedPareto& d) {
                          const double s = pareto_scale(d);
                          const double tail = 0.5 * std::pow(std::fabs(x - d.mu) / s + 1.0, -d.k);
                          return x < d.mu ? tail : 1.0 - tail;
                        },
                        [x](const Laplace& d) {
                          const double tail = 0.5 * std::exp(-d.lambda * std::fabs(x - d.mu));
                          return x < d.mu ? tail : 1.0 - tail;
                        },
                    },
                    validate(spec));
}

Sampler::Sampler(const DistributionSpec& spec) : spec_(validate(spec)) {
  if (const auto* d = std::get_if<SymmetrizedPareto>(&spec_)) scale_ = pareto_scale(*d);
}

double Sampler::quantile_at(double u) const {
  return std::visit(Overloaded{
                        [u](const Uniform& d) {
                          if (!(u >= 0.0 && u <= 1.0))
                            throw DomainError("quantile requires 0 <= u <= 1");
                          return -d.a + u * (d.a + d.b);
                        },
                        [u](const Normal& d) {
                          require_open_unit(u);
                          return d.mu + d.sigma * std_normal_quantile(u);
                        },
                        [u, this](const SymmetrizedPareto& d) {
                          require_open_unit(u);
                          if (u < 0.5) return d.mu - scale_ * std::expm1(-std::log(2.0 * u) / d.k);
                          return d.mu + scale_ * std::expm1(-std::log(2.0 * (1.0 - u)) / d.k);
                        },
                        [u](const Laplace& d) {
                          require_open_unit(u);
                          if (u < 0.5) return d.mu + std::log(2.0 * u) / d.lambda;
                          return d.mu - std::log(2.0 * (1.0 - u)) / d.lambda;
                        },
                    },
                    spec_);
}

double quantile(const DistributionSpec& spec, double u) { return Sampler(spec).quantile_at(u); }

double sample(const DistributionSpec& spec, mc::RngStream& stream) { return Sampler(spec)(stream); }

double first_quartile(const DistributionSpec& spec) { return quantile(spec, 0.25); }

DistributionSpec standardize_by_quartile(Family family, double q1_offset, double k) {
  if (!(std::isfinite(q1_offset) && q1_offset < 0.0))
    throw ParameterError("reference first-quartile offset must be negative");
  switch (family) {
    case Family::uniform:
      // Q1 = -(sqrt(3)/2) sigma and a = b = sqrt(3) sigma
      return Uniform{-2.0 * q1_offset, -2.0 * q1_offset};
    case Family::normal:
      return Normal{0.0, q1_offset / std_normal_quantile(0.25)};
    case Family::symmetrized_pareto: {
      const double c = pareto_scale_constant(k);
      return SymmetrizedPareto{k, 0.0, q1_offset / (c * (1.0 - std::exp2(1.0 / k)))};
    }
    case Family::laplace:
      return Laplace{0.0, -std::numbers::ln2 / q1_offset};
  }
  throw ParameterError("unsupported family");
}

std::optional<DistributionSpec> FamilySweep::spec_at_mean(double mu) const {
  switch (family) {
    case Family::uniform: {
      const double half_width = kSqrt3 * sigma;
      const double a = half_width - mu;
      const double b = half_width + mu;
      if (!(a > 0.0 && b > 0.0)) return std::nullopt;
      return Uniform{a, b};
    }
    case Family::normal:
      return Normal{mu, sigma};
    case Family::symmetrized_pareto:
      return SymmetrizedPareto{k, mu, sigma};
    case Family::laplace:
      return Laplace{mu, std::numbers::sqrt2 / sigma};
  }
  throw ParameterError("unsupported family");
}

EnvironmentStats FamilySweep::stats_at_mean(double mu) const {
  if (auto spec = spec_at_mean(mu)) return stats(*spec);
  // One-sided uniform support: every proposal component has the sign of mu.
  EnvironmentStats s;
  s.mu = mu;
  s.sigma = sigma;
  s.rho = mu / sigma;
  if (mu > 0.0) {
    s.p = 1.0;
    s.e_plus = mu;
  } else {
    s.q = 1.0;
    s.e_minus = -mu;
  }
  return s;
}

}  // namespace vise::env
