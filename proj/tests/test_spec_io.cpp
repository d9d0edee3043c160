#include <doctest.h>

#include <numbers>

#include "vise/errors.hpp"
#include "vise/spec_io.hpp"

using namespace vise::env;

TEST_CASE("key-value form") {
  const auto spec = parse_spec("family=normal mu=0.5 sigma=1.0");
  REQUIRE(std::holds_alternative<Normal>(spec));
  CHECK(std::get<Normal>(spec).mu == 0.5);
  CHECK(std::get<Normal>(spec).sigma == 1.0);

  const auto pareto = std::get<SymmetrizedPareto>(parse_spec("family=pareto k=5 mu=-0.25"));
  CHECK(pareto.k == 5.0);
  CHECK(pareto.mu == -0.25);
  CHECK(pareto.sigma == 1.0);
}

TEST_CASE("JSON form") {
  const auto spec = parse_spec(R"({"family": "uniform", "a": 1, "b": 3})");
  CHECK(std::get<Uniform>(spec).a == 1.0);
  CHECK(std::get<Uniform>(spec).b == 3.0);
  CHECK_THROWS_AS(parse_spec(R"({"family": "uniform", "a": "1"})"), vise::ParameterError);
  CHECK_THROWS_AS(parse_spec(R"({"family": 3})"), vise::ParameterError);
  CHECK_THROWS_AS(parse_spec(R"({"family": "uniform",)"), vise::ParameterError);
}

TEST_CASE("laplace takes lambda or sigma") {
  CHECK(std::get<Laplace>(parse_spec("family=laplace lambda=2")).lambda == 2.0);
  CHECK(std::get<Laplace>(parse_spec("family=laplace sigma=2")).lambda ==
        doctest::Approx(std::numbers::sqrt2 / 2.0));
  CHECK_THROWS_AS(parse_spec("family=laplace sigma=1 lambda=1"), vise::ParameterError);
  CHECK_THROWS_AS(parse_spec("family=laplace sigma=0"), vise::ParameterError);
}

TEST_CASE("malformed input is a ParameterError") {
  CHECK_THROWS_WITH_AS(parse_spec("family=pareto k=2"), "k must exceed 2", vise::ParameterError);
  CHECK_THROWS_AS(parse_spec("mu=1"), vise::ParameterError);
  CHECK_THROWS_AS(parse_spec("family=cauchy"), vise::ParameterError);
  CHECK_THROWS_AS(parse_spec("family=normal mu"), vise::ParameterError);
  CHECK_THROWS_AS(parse_spec("family=normal mu=abc"), vise::ParameterError);
  CHECK_THROWS_AS(parse_spec("family=normal mu=1x"), vise::ParameterError);
  CHECK_THROWS_AS(parse_spec("family=normal nu=1"), vise::ParameterError);
  CHECK_THROWS_AS(parse_spec("family=normal a=1"), vise::ParameterError);
}

TEST_CASE("serialization round-trips exactly") {
  const DistributionSpec specs[] = {Uniform{0.1, 2.0 / 3.0}, Normal{-0.3, 1.7}, SymmetrizedPareto{8.0, 0.1, 0.9},
                                    Laplace{1e-3, std::numbers::sqrt2}};
  for (const auto& spec : specs) {
    const auto kv = parse_spec(to_key_value(spec));
    const auto js = parse_spec(to_json(spec));
    CHECK(to_key_value(kv) == to_key_value(spec));
    CHECK(to_json(js) == to_json(spec));
  }
  CHECK(to_key_value(Normal{0.5, 1.0}) == "family=normal mu=0.5 sigma=1");
  CHECK(to_json(Uniform{1.0, 3.0}) == R"({"family":"uniform","a":1.0,"b":3.0})");
}
