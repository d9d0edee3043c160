#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "vise/environments.hpp"
#include "vise/rng.hpp"
#include "vise/voting.hpp"

namespace vise::mc {

struct StepOutcome {
  bool accepted = false;
  /// The proposal when accepted, zeros otherwise.
  std::vector<double> increments;
};

/// Draws one proposal (components 1..n, one variate each, in order) and
/// votes on it.
StepOutcome simulate_step(const env::DistributionSpec& spec, const voting::VotingRule& rule,
                          RngStream& stream);

struct SimulationReport {
  double mean_increment = 0.0;
  double std_error = 0.0;  // sample standard deviation / sqrt(replications)
  double acceptance_rate = 0.0;
  std::int64_t replications = 0;
  int n = 0;
  int n0 = 0;
  double alpha = 0.0;
  std::uint64_t seed = 0;
};

/// Monte Carlo estimate of E(eta) from agent 1's realized increment.
/// Replication r draws from RngStream(seed, r). Replications are processed
/// in fixed-size blocks whose partial moments are merged in block order, so
/// the report is bit-identical for any `threads` >= 1.
/// Throws vise::ParameterError for replications < 2.
SimulationReport estimate_expected_increment(const env::DistributionSpec& spec, int n, double alpha,
                                             std::int64_t replications, std::uint64_t seed,
                                             unsigned threads = 1);

/// Cumulative utilities of every agent after each step.
struct Trajectory {
  int steps = 0;
  int n = 0;
  std::vector<double> utilities;      // row-major, steps x n
  std::vector<std::uint8_t> accepted;  // one flag per step

  double utility(int step, int agent) const {
    return utilities[static_cast<std::size_t>(step) * n + agent];
  }
};

/// Runs the voting process from zero utility. Step t (0-based) draws from
/// RngStream(seed, t). Throws vise::ParameterError for steps < 1.
Trajectory run_dynamics(const env::DistributionSpec& spec, int n, double alpha, int steps,
                        std::uint64_t seed);

/// CSV with header step,agent_1,...,agent_n,accepted; steps numbered from 1.
void write_trajectory_csv(std::ostream& out, const Trajectory& trajectory);

/// JSON object holding every SimulationReport field.
std::string to_json(const SimulationReport& report);

}  // namespace vise::mc
