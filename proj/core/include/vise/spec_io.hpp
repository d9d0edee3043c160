#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "vise/environments.hpp"

namespace vise::env {

/// Loose field bag used to assemble a DistributionSpec from flags, key-value
/// text or JSON. Unset fields take the family defaults (mu = 0, sigma = 1,
/// a = b = 1, k = 8); a Laplace spec given sigma but no lambda uses
/// lambda = sqrt(2) / sigma.
struct SpecFields {
  std::string family;
  std::optional<double> a, b, mu, sigma, k, lambda;
};

/// Throws vise::ParameterError for an unknown family, a field that does not
/// belong to the family, or any failed validation constraint.
DistributionSpec build_spec(const SpecFields& fields);

/// Parses either the flat form "family=normal mu=0.5 sigma=1.0" or the JSON
/// object {"family": "normal", "mu": 0.5, "sigma": 1.0}.
DistributionSpec parse_spec(std::string_view text);

std::string to_key_value(const DistributionSpec& spec);
std::string to_json(const DistributionSpec& spec);

}  // namespace vise::env
