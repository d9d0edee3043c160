#include "vise/spec_io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <sstream>
#include <vector>

#include <json.hpp>

#include "vise/errors.hpp"

namespace vise::env {

namespace {

using Json = nlohmann::ordered_json;

std::optional<double>* field_slot(SpecFields& f, std::string_view key) {
  if (key == "a") return &f.a;
  if (key == "b") return &f.b;
  if (key == "mu") return &f.mu;
  if (key == "sigma") return &f.sigma;
  if (key == "k") return &f.k;
  if (key == "lambda") return &f.lambda;
  return nullptr;
}

double parse_number(std::string_view key, std::string_view text) {
  double value = 0.0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc{} || ptr != end)
    throw ParameterError("field '" + std::string(key) + "' is not a number: '" + std::string(text) + "'");
  return value;
}

void reject_foreign(const SpecFields& f, std::initializer_list<std::string_view> allowed) {
  const std::pair<std::string_view, const std::optional<double>*> all[] = {
      {"a", &f.a}, {"b", &f.b}, {"mu", &f.mu}, {"sigma", &f.sigma}, {"k", &f.k}, {"lambda", &f.lambda}};
  for (const auto& [name, slot] : all) {
    if (!slot->has_value()) continue;
    bool ok = false;
    for (auto a : allowed) ok = ok || a == name;
    if (!ok)
      throw ParameterError("field '" + std::string(name) + "' does not apply to family '" + f.family + "'");
  }
}

std::string number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

Json json_of(const DistributionSpec& spec) {
  Json j;
  j["family"] = std::string(family_name(family_of(spec)));
  std::visit(
      [&j](const auto& d) {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, Uniform>) {
          j["a"] = d.a;
          j["b"] = d.b;
        } else if constexpr (std::is_same_v<T, Normal>) {
          j["mu"] = d.mu;
          j["sigma"] = d.sigma;
        } else if constexpr (std::is_same_v<T, SymmetrizedPareto>) {
          j["k"] = d.k;
          j["mu"] = d.mu;
          j["sigma"] = d.sigma;
        } else {
          j["mu"] = d.mu;
          j["lambda"] = d.lambda;
        }
      },
      spec);
  return j;
}

}  // namespace

DistributionSpec build_spec(const SpecFields& f) {
  const auto family = parse_family(f.family);
  if (!family) throw ParameterError("unsupported family '" + f.family + "'");
  DistributionSpec spec;
  switch (*family) {
    case Family::uniform:
      reject_foreign(f, {"a", "b"});
      spec = Uniform{f.a.value_or(1.0), f.b.value_or(1.0)};
      break;
    case Family::normal:
      reject_foreign(f, {"mu", "sigma"});
      spec = Normal{f.mu.value_or(0.0), f.sigma.value_or(1.0)};
      break;
    case Family::symmetrized_pareto:
      reject_foreign(f, {"k", "mu", "sigma"});
      spec = SymmetrizedPareto{f.k.value_or(8.0), f.mu.value_or(0.0), f.sigma.value_or(1.0)};
      break;
    case Family::laplace: {
      reject_foreign(f, {"mu", "lambda", "sigma"});
      if (f.lambda && f.sigma) throw ParameterError("give either lambda or sigma for laplace, not both");
      double lambda = f.lambda.value_or(std::numbers::sqrt2);
      if (f.sigma) {
        if (!(*f.sigma > 0.0)) throw ParameterError("sigma must be positive and finite");
        lambda = std::numbers::sqrt2 / *f.sigma;
      }
      spec = Laplace{f.mu.value_or(0.0), lambda};
      break;
    }
  }
  validate(spec);
  return spec;
}

DistributionSpec parse_spec(std::string_view text) {
  SpecFields fields;
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string_view::npos && text[first] == '{') {
    Json j;
    try {
      j = Json::parse(text);
    } catch (const nlohmann::json::exception& e) {
      throw ParameterError(std::string("malformed spec JSON: ") + e.what());
    }
    for (const auto& [key, value] : j.items()) {
      if (key == "family") {
        if (!value.is_string()) throw ParameterError("field 'family' must be a string");
        fields.family = value.get<std::string>();
        continue;
      }
      auto* slot = field_slot(fields, key);
      if (!slot) throw ParameterError("unknown field '" + key + "'");
      if (!value.is_number()) throw ParameterError("field '" + key + "' must be a number");
      *slot = value.get<double>();
    }
  } else {
    std::istringstream in{std::string(text)};
    std::string token;
    while (in >> token) {
      const auto eq = token.find('=');
      if (eq == std::string::npos || eq == 0)
        throw ParameterError("expected key=value, got '" + token + "'");
      const std::string key = token.substr(0, eq);
      const std::string value = token.substr(eq + 1);
      if (key == "family") {
        fields.family = value;
        continue;
      }
      auto* slot = field_slot(fields, key);
      if (!slot) throw ParameterError("unknown field '" + key + "'");
      *slot = parse_number(key, value);
    }
  }
  if (fields.family.empty()) throw ParameterError("missing field 'family'");
  return build_spec(fields);
}

std::string to_key_value(const DistributionSpec& spec) {
  const Json j = json_of(spec);
  std::string out;
  for (const auto& [key, value] : j.items()) {
    if (!out.empty()) out += ' ';
    out += key + "=" + (value.is_string() ? value.get<std::string>() : number(value.get<double>()));
  }
  return out;
}

std::string to_json(const DistributionSpec& spec) { return json_of(spec).dump(); }

}  // namespace vise::env
