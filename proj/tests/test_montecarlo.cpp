#include <doctest.h>

#include <cmath>
#include <numbers>
#include <sstream>
#include <string>

#include <json.hpp>

#include "vise/environments.hpp"
#include "vise/errors.hpp"
#include "vise/montecarlo.hpp"
#include "vise/numerics.hpp"
#include "vise/rng.hpp"
#include "vise/voting.hpp"

using namespace vise::mc;
using vise::env::Laplace;
using vise::env::Normal;
using vise::env::SymmetrizedPareto;
using vise::env::Uniform;

TEST_CASE("philox4x32-10 known answers") {
  // Reference vectors distributed with the Random123 library.
  CHECK(philox4x32_10({0, 0, 0, 0}, {0, 0}) == PhiloxBlock{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8});
  CHECK(philox4x32_10({0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff}, {0xffffffff, 0xffffffff}) ==
        PhiloxBlock{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd});
  CHECK(philox4x32_10({0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344}, {0xa4093822, 0x299f31d0}) ==
        PhiloxBlock{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1});
}

TEST_CASE("rng streams") {
  RngStream a(42, 0);
  RngStream b(42, 0);
  RngStream other_stream(42, 1);
  RngStream other_seed(43, 0);
  int differ_stream = 0;
  int differ_seed = 0;
  for (int i = 0; i < 64; ++i) {
    const auto v = a.next_u64();
    CHECK(v == b.next_u64());
    differ_stream += v != other_stream.next_u64();
    differ_seed += v != other_seed.next_u64();
  }
  CHECK(differ_stream == 64);
  CHECK(differ_seed == 64);
  CHECK(a.position() == 64);
  CHECK(a.seed() == 42);
  CHECK(other_stream.stream_id() == 1);

  RngStream u(1, 1);
  for (int i = 0; i < 100000; ++i) {
    const double x = u.next_uniform();
    REQUIRE(x > 0.0);
    REQUIRE(x < 1.0);
  }
}

TEST_CASE("simulate_step") {
  const vise::env::DistributionSpec spec = Normal{0.1, 1.0};
  SUBCASE("reject-all rule") {
    RngStream s(9, 0);
    for (int i = 0; i < 200; ++i) {
      const auto out = simulate_step(spec, vise::voting::VotingRule(6, 1.0), s);
      CHECK_FALSE(out.accepted);
      for (double v : out.increments) CHECK(v == 0.0);
    }
  }
  SUBCASE("accept-all rule returns the raw proposal") {
    RngStream s(9, 0);
    RngStream raw(9, 0);
    const vise::env::Sampler sampler(spec);
    for (int i = 0; i < 200; ++i) {
      const auto out = simulate_step(spec, vise::voting::VotingRule(6, -1.0 / 6.0), s);
      CHECK(out.accepted);
      for (double v : out.increments) CHECK(v == sampler(raw));
    }
  }
  SUBCASE("consumes n variates and is deterministic") {
    RngStream s1(3, 7);
    RngStream s2(3, 7);
    const vise::voting::VotingRule rule(11, 0.5);
    const auto a = simulate_step(spec, rule, s1);
    const auto b = simulate_step(spec, rule, s2);
    CHECK(s1.position() == 11);
    CHECK(a.accepted == b.accepted);
    CHECK(a.increments == b.increments);
  }
}

TEST_CASE("estimate_expected_increment") {
  SUBCASE("symmetric uniform, n = 2, majority") {
    const auto report = estimate_expected_increment(Uniform{1.0, 1.0}, 2, 0.5, 1000000, 42);
    CHECK(report.n0 == 1);
    CHECK(report.replications == 1000000);
    CHECK(std::fabs(report.mean_increment - 0.125) <= 4.0 * report.std_error);
    const double g = vise::numerics::binomial_upper_tail(2, 0.5, 1);
    CHECK(std::fabs(report.acceptance_rate - g) <= 4.0 * std::sqrt(g * (1.0 - g) / 1e6));
  }
  SUBCASE("reject-all gives exactly zero") {
    const auto report = estimate_expected_increment(Laplace{0.5, 1.0}, 5, 1.0, 10000, 1);
    CHECK(report.mean_increment == 0.0);
    CHECK(report.std_error == 0.0);
    CHECK(report.acceptance_rate == 0.0);
  }
  SUBCASE("accept-all estimates mu") {
    const auto report = estimate_expected_increment(SymmetrizedPareto{8.0, 0.2, 1.0}, 5, -0.2, 200000, 5);
    CHECK(report.acceptance_rate == 1.0);
    CHECK(std::fabs(report.mean_increment - 0.2) <= 4.0 * report.std_error);
  }
  SUBCASE("result does not depend on the thread count") {
    const auto one = estimate_expected_increment(Normal{-0.3, 1.0}, 21, 0.5, 100000, 77, 1);
    const auto four = estimate_expected_increment(Normal{-0.3, 1.0}, 21, 0.5, 100000, 77, 4);
    CHECK(to_json(one) == to_json(four));
  }
  CHECK_THROWS_AS(estimate_expected_increment(Normal{}, 3, 0.5, 1, 0), vise::ParameterError);
}

TEST_CASE("per-component positivity frequency matches p") {
  const vise::env::DistributionSpec spec = SymmetrizedPareto{8.0, -0.4, 1.0};
  const double p = vise::env::stats(spec).p;
  const vise::env::Sampler sampler(spec);
  constexpr int draws = 1000000;
  int positive = 0;
  for (int r = 0; r < draws / 10; ++r) {
    RngStream s(17, static_cast<std::uint64_t>(r));
    for (int i = 0; i < 10; ++i) positive += sampler(s) > 0.0;
  }
  CHECK(std::fabs(static_cast<double>(positive) / draws - p) <= 4.0 * std::sqrt(p * (1.0 - p) / draws));
}

TEST_CASE("run_dynamics") {
  const vise::env::DistributionSpec spec = Laplace{0.1, std::numbers::sqrt2};
  SUBCASE("increments are the step outcomes") {
    const auto t = run_dynamics(spec, 7, 0.5, 50, 123);
    CHECK(t.steps == 50);
    CHECK(t.utilities.size() == 350);
    for (int step = 0; step < t.steps; ++step) {
      RngStream stream(123, static_cast<std::uint64_t>(step));
      const auto outcome = simulate_step(spec, vise::voting::VotingRule(7, 0.5), stream);
      CHECK(t.accepted[static_cast<std::size_t>(step)] == (outcome.accepted ? 1 : 0));
      for (int i = 0; i < 7; ++i) {
        const double before = step == 0 ? 0.0 : t.utility(step - 1, i);
        CHECK(t.utility(step, i) - before == doctest::Approx(outcome.increments[static_cast<std::size_t>(i)]));
        if (!outcome.accepted) CHECK(t.utility(step, i) == before);
      }
    }
  }
  SUBCASE("reject-all trajectory is flat") {
    const auto t = run_dynamics(spec, 4, 1.0, 20, 1);
    for (double u : t.utilities) CHECK(u == 0.0);
  }
  SUBCASE("accept-all drift") {
    constexpr int steps = 100000;
    const auto t = run_dynamics(spec, 2, -0.5, steps, 8);
    const double sigma = vise::env::std_dev(spec);
    const double drift = t.utility(steps - 1, 0) / steps;
    CHECK(std::fabs(drift - 0.1) <= 4.0 * sigma / std::sqrt(static_cast<double>(steps)));
  }
  CHECK_THROWS_AS(run_dynamics(spec, 3, 0.5, 0, 1), vise::ParameterError);
}

TEST_CASE("exports") {
  const auto t = run_dynamics(Uniform{1.0, 1.0}, 2, 0.5, 3, 4);
  std::ostringstream csv;
  write_trajectory_csv(csv, t);
  std::istringstream lines(csv.str());
  std::string header;
  std::getline(lines, header);
  CHECK(header == "step,agent_1,agent_2,accepted");
  int rows = 0;
  for (std::string line; std::getline(lines, line);) ++rows;
  CHECK(rows == 3);

  const auto report = estimate_expected_increment(Uniform{1.0, 1.0}, 2, 0.5, 1000, 4);
  const auto j = nlohmann::json::parse(to_json(report));
  for (const char* key : {"mean_increment", "std_error", "acceptance_rate", "replications", "n", "n0", "alpha", "seed"}) {
    CHECK(j.contains(key));
  }
  CHECK(j["seed"] == 4);
  CHECK(j["replications"] == 1000);
}
