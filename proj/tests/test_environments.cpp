#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "oracles.hpp"
#include "vise/environments.hpp"
#include "vise/errors.hpp"
#include "vise/numerics.hpp"
#include "vise/rng.hpp"
#include "vise/voting.hpp"

using namespace vise::env;

namespace {

const double kSqrt3 = std::sqrt(3.0);

// One spec per family at adjusted mean rho with unit sigma.
std::vector<DistributionSpec> specs_at(double rho) {
  std::vector<DistributionSpec> out{Normal{rho, 1.0}, SymmetrizedPareto{8.0, rho, 1.0},
                                    Laplace{rho, std::numbers::sqrt2}};
  if (std::fabs(rho) < kSqrt3) out.push_back(Uniform{kSqrt3 - rho, kSqrt3 + rho});
  return out;
}

}  // namespace

TEST_CASE("validation names the violated parameter") {
  CHECK_THROWS_WITH_AS(validate(Uniform{0.0, 1.0}), "a must be positive and finite", vise::ParameterError);
  CHECK_THROWS_WITH_AS(validate(Uniform{1.0, -1.0}), "b must be positive and finite", vise::ParameterError);
  CHECK_THROWS_WITH_AS(validate(Normal{0.0, 0.0}), "sigma must be positive and finite", vise::ParameterError);
  CHECK_THROWS_WITH_AS(validate(SymmetrizedPareto{2.0, 0.0, 1.0}), "k must exceed 2", vise::ParameterError);
  CHECK_THROWS_WITH_AS(validate(Laplace{0.0, -1.0}), "lambda must be positive and finite", vise::ParameterError);
  CHECK_THROWS_AS(validate(Normal{std::nan(""), 1.0}), vise::ParameterError);
  CHECK_NOTHROW(validate(SymmetrizedPareto{2.0001, 0.0, 1.0}));
}

TEST_CASE("family names round-trip") {
  for (auto f : {Family::uniform, Family::normal, Family::symmetrized_pareto, Family::laplace}) {
    CHECK(parse_family(family_name(f)) == f);
  }
  CHECK(parse_family("symmetrized_pareto") == Family::symmetrized_pareto);
  CHECK_FALSE(parse_family("cauchy").has_value());
}

TEST_CASE("stats table rows") {
  SUBCASE("symmetric uniform") {
    const auto s = stats(Uniform{1.0, 1.0});
    CHECK(s.mu == 0.0);
    CHECK(s.rho == 0.0);
    CHECK(s.p == 0.5);
    CHECK(s.q == 0.5);
    CHECK(s.e_plus == 0.5);
    CHECK(s.e_minus == 0.5);
  }
  SUBCASE("skewed uniform") {
    const auto s = stats(Uniform{1.0, 3.0});
    CHECK(s.p == doctest::Approx(0.75));
    CHECK(s.e_plus == doctest::Approx(1.5));
    CHECK(s.e_minus == doctest::Approx(0.5));
    CHECK(s.win_loss_ratio() == doctest::Approx(3.0));
    CHECK(s.sigma == doctest::Approx(4.0 / (2.0 * kSqrt3)));
  }
  SUBCASE("standard normal") {
    const auto s = stats(Normal{0.0, 1.0});
    // 2 * integral_0^inf x phi(x) dx = sqrt(2/pi)
    CHECK(s.e_plus == doctest::Approx(0.797884560802865).epsilon(1e-14));
    CHECK(s.e_minus == doctest::Approx(0.797884560802865).epsilon(1e-14));
    CHECK(s.p == 0.5);
  }
  SUBCASE("unit laplace") {
    const auto s = stats(Laplace{0.0, 1.0});
    CHECK(s.e_plus == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(s.e_minus == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(s.p == 0.5);
    CHECK(s.sigma == doctest::Approx(std::numbers::sqrt2));
  }
  SUBCASE("pareto carries C and rho_hat") {
    const auto s = stats(SymmetrizedPareto{8.0, -0.3, 2.0});
    REQUIRE(s.c_const.has_value());
    CHECK(*s.c_const == doctest::Approx(std::sqrt(21.0)));
    CHECK(*s.rho_hat == doctest::Approx(0.15 / std::sqrt(21.0)));
    CHECK_FALSE(stats(Normal{}).c_const.has_value());
  }
  CHECK_THROWS_AS(EnvironmentStats{}.win_loss_ratio(), vise::DomainError);
}

TEST_CASE("conditional means match quadrature on the rho grid") {
  for (const double rho : vise::voting::make_grid(-2.5, 2.5, 0.1)) {
    for (const auto& spec : specs_at(rho)) {
      CAPTURE(rho);
      CAPTURE(family_name(family_of(spec)));
      const auto s = stats(spec);
      const auto reference = oracle::conditional_means(spec);
      CHECK(std::fabs(s.e_plus - reference.e_plus) <= 1e-8);
      CHECK(std::fabs(s.e_minus - reference.e_minus) <= 1e-8);
      CHECK(std::fabs(s.p - reference.p) <= 1e-10);
      CHECK(std::fabs(s.p - (1.0 - cdf(spec, 0.0))) <= 1e-12);
      CHECK(s.p + s.q == 1.0);
      // mean decomposes over the sign of zeta
      CHECK(s.p * s.e_plus - s.q * s.e_minus == doctest::Approx(s.mu).epsilon(1e-12).scale(1.0));
    }
  }
}

TEST_CASE("branch continuity at mu = 0") {
  for (const double mu : {1e-12, 1e-10}) {
    const auto pp = stats(SymmetrizedPareto{8.0, mu, 1.0});
    const auto pm = stats(SymmetrizedPareto{8.0, -mu, 1.0});
    CHECK(std::fabs(pp.e_plus - pm.e_plus) < 1e-8);
    CHECK(std::fabs(pp.e_minus - pm.e_minus) < 1e-8);
    CHECK(std::fabs(pp.p - pm.p) < 1e-8);
    const auto lp = stats(Laplace{mu, 1.0});
    const auto lm = stats(Laplace{-mu, 1.0});
    CHECK(std::fabs(lp.e_plus - lm.e_plus) < 1e-8);
    CHECK(std::fabs(lp.e_minus - lm.e_minus) < 1e-8);
  }
}

// The far-side conditional mean of the Pareto family is sigma (C + |rho|) / (k - 1),
// which drifts linearly away from the Laplace value; at k = 100 the gap reaches
// 0.0217 at |rho| = 2.5. Registered as its own ctest entry.
TEST_CASE("pareto k=100 stats track laplace across the full rho grid") {
  for (const double rho : vise::voting::make_grid(-2.5, 2.5, 0.1)) {
    const auto p = stats(SymmetrizedPareto{100.0, rho, 1.0});
    const auto l = stats(Laplace{rho, std::numbers::sqrt2});
    CHECK(std::fabs(p.e_plus - l.e_plus) <= 2e-2);
    CHECK(std::fabs(p.e_minus - l.e_minus) <= 2e-2);
    CHECK(std::fabs(p.p - l.p) <= 2e-2);
  }
}

TEST_CASE("cdf is the integral of pdf") {
  const vise::numerics::Tolerance tol(1e-15, 1e-13, 200);
  const DistributionSpec pareto = SymmetrizedPareto{8.0, 0.0, 1.0};
  const double left = vise::numerics::adaptive_quadrature([&](double x) { return pdf(pareto, x); },
                                                          -std::numeric_limits<double>::infinity(), -0.5, tol);
  CHECK(std::fabs(cdf(pareto, -0.5) - left) < 1e-10);
  CHECK(cdf(pareto, 0.0) == 0.5);
  CHECK(cdf(SymmetrizedPareto{3.0, 1.7, 2.0}, 1.7) == 0.5);
  CHECK(cdf(Laplace{-2.0, 3.0}, -2.0) == 0.5);
  CHECK(cdf(Uniform{1.0, 2.0}, -1.0) == 0.0);
  CHECK(cdf(Uniform{1.0, 2.0}, 2.0) == 1.0);

  for (const double rho : {-1.0, 0.0, 0.7}) {
    for (const auto& spec : specs_at(rho)) {
      for (double x = -3.0; x <= 3.0; x += 0.25) {
        // skip the support edges of the uniform and the cusp of the two-sided densities
        if (std::holds_alternative<Uniform>(spec) && std::fabs(std::fabs(x - rho) - kSqrt3) < 1e-4) continue;
        if (!std::holds_alternative<Normal>(spec) && std::fabs(x - rho) < 1e-4) continue;
        CHECK(std::fabs(oracle::central_difference([&](double t) { return cdf(spec, t); }, x, 1e-5) -
                        pdf(spec, x)) < 1e-7);
      }
    }
  }
}

TEST_CASE("quantile inverts cdf") {
  for (const double rho : {-1.2, 0.0, 0.4}) {
    for (const auto& spec : specs_at(rho)) {
      for (double x = -2.0; x <= 2.0; x += 0.1) {
        const double u = cdf(spec, x);
        if (u <= 0.0 || u >= 1.0) continue;
        CHECK(std::fabs(quantile(spec, u) - x) <= 1e-10);
      }
    }
  }
  CHECK(quantile(Laplace{3.0, 0.7}, 0.5) == 3.0);
  CHECK(quantile(Uniform{1.0, 2.0}, 0.0) == -1.0);
  CHECK(quantile(Uniform{1.0, 2.0}, 1.0) == 2.0);
  CHECK_THROWS_AS(quantile(Normal{}, 0.0), vise::DomainError);
  CHECK_THROWS_AS(quantile(Laplace{}, 1.0), vise::DomainError);
  CHECK_THROWS_AS(quantile(SymmetrizedPareto{}, 0.0), vise::DomainError);
  CHECK_THROWS_AS(quantile(Uniform{}, 1.5), vise::DomainError);
}

TEST_CASE("first quartile") {
  CHECK(std::fabs(first_quartile(Normal{0.0, 1.0}) + 0.6745) <= 5e-5);
  CHECK(first_quartile(Laplace{0.0, std::numbers::sqrt2}) ==
        doctest::Approx(-std::numbers::ln2 / std::numbers::sqrt2).epsilon(1e-14));
  CHECK(first_quartile(Uniform{kSqrt3, kSqrt3}) == doctest::Approx(-kSqrt3 / 2.0).epsilon(1e-14));
  const double c = pareto_scale_constant(8.0);
  CHECK(first_quartile(SymmetrizedPareto{8.0, 0.0, 1.0}) ==
        doctest::Approx(c * (1.0 - std::exp2(1.0 / 8.0))).epsilon(1e-13));
  for (const double rho : {-0.9, 0.0, 1.3}) {
    for (const auto& spec : specs_at(rho)) CHECK(std::fabs(cdf(spec, first_quartile(spec)) - 0.25) <= 1e-12);
  }
}

TEST_CASE("quartile standardization against a unit normal") {
  const double offset = first_quartile(Normal{0.0, 1.0});
  // Quantile-matching constants evaluated independently in 30-digit arithmetic.
  CHECK(std_dev(standardize_by_quartile(Family::uniform, offset)) == doctest::Approx(0.7788337).epsilon(1e-6));
  CHECK(std_dev(standardize_by_quartile(Family::laplace, offset)) == doctest::Approx(1.3761472).epsilon(1e-6));
  CHECK(std_dev(standardize_by_quartile(Family::symmetrized_pareto, offset, 8.0)) ==
        doctest::Approx(1.6262227).epsilon(1e-6));
  CHECK(std_dev(standardize_by_quartile(Family::normal, offset)) == doctest::Approx(1.0).epsilon(1e-14));
  for (auto f : {Family::uniform, Family::normal, Family::symmetrized_pareto, Family::laplace}) {
    const auto spec = standardize_by_quartile(f, -0.4, 5.0);
    CHECK(mean(spec) == 0.0);
    CHECK(first_quartile(spec) == doctest::Approx(-0.4).epsilon(1e-12));
  }
  CHECK_THROWS_AS(standardize_by_quartile(Family::normal, 0.5), vise::ParameterError);
}

TEST_CASE("sampling") {
  SUBCASE("consumes one variate and is deterministic") {
    vise::mc::RngStream a(7, 3);
    vise::mc::RngStream b(7, 3);
    const DistributionSpec spec = SymmetrizedPareto{4.0, 0.2, 1.5};
    for (int i = 0; i < 100; ++i) CHECK(sample(spec, a) == sample(spec, b));
    CHECK(a.position() == 100);
  }
  SUBCASE("sampler equals quantile of the same variate") {
    vise::mc::RngStream a(11, 0);
    vise::mc::RngStream b(11, 0);
    const DistributionSpec spec = Laplace{-0.5, 2.0};
    const Sampler sampler(spec);
    for (int i = 0; i < 100; ++i) CHECK(sampler(a) == quantile(spec, b.next_uniform()));
  }
  SUBCASE("empirical mean within 4 sigma / 1000 of mu") {
    for (const auto& spec : specs_at(0.3)) {
      const Sampler sampler(spec);
      vise::mc::RngStream stream(2024, 1);
      vise::numerics::CompensatedSum total;
      constexpr int draws = 1000000;
      for (int i = 0; i < draws; ++i) total.add(sampler(stream));
      CHECK(std::fabs(total.value() / draws - mean(spec)) <= 4.0 * std_dev(spec) / 1000.0);
    }
  }
}

TEST_CASE("family sweep") {
  const FamilySweep uniform{Family::uniform, 1.0, 8.0};
  const auto spec = uniform.spec_at_mean(0.5);
  REQUIRE(spec.has_value());
  CHECK(mean(*spec) == doctest::Approx(0.5));
  CHECK(std_dev(*spec) == doctest::Approx(1.0));
  CHECK_FALSE(uniform.spec_at_mean(2.0).has_value());
  const auto high = uniform.stats_at_mean(2.0);
  CHECK(high.p == 1.0);
  CHECK(high.e_plus == 2.0);
  const auto low = uniform.stats_at_mean(-2.0);
  CHECK(low.q == 1.0);
  CHECK(low.e_minus == 2.0);

  const FamilySweep laplace{Family::laplace, 2.0, 8.0};
  CHECK(std_dev(*laplace.spec_at_mean(0.1)) == doctest::Approx(2.0));
}
