#include "vise/montecarlo.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <thread>

#include <json.hpp>

#include "vise/errors.hpp"

namespace vise::mc {

namespace {

constexpr std::int64_t kBlockSize = 1 << 14;

// Running moments of one block (Welford), merged with Chan's update.
struct Moments {
  std::int64_t count = 0;
  double mean = 0.0;
  double m2 = 0.0;
  std::int64_t accepted = 0;

  void add(double v) {
    ++count;
    const double delta = v - mean;
    mean += delta / static_cast<double>(count);
    m2 += delta * (v - mean);
  }

  void merge(const Moments& other) {
    if (other.count == 0) return;
    const auto total = count + other.count;
    const double delta = other.mean - mean;
    const double weight = static_cast<double>(other.count) / static_cast<double>(total);
    mean += delta * weight;
    m2 += other.m2 + delta * delta * static_cast<double>(count) * weight;
    count = total;
    accepted += other.accepted;
  }
};

Moments run_block(const env::Sampler& sampler, const voting::VotingRule& rule, std::uint64_t seed,
                  std::int64_t first, std::int64_t last) {
  Moments m;
  for (std::int64_t r = first; r < last; ++r) {
    RngStream stream(seed, static_cast<std::uint64_t>(r));
    const double own = sampler(stream);
    int positive = own > 0.0 ? 1 : 0;
    for (int i = 1; i < rule.n(); ++i) positive += sampler(stream) > 0.0 ? 1 : 0;
    const bool accepted = rule.accepts(positive);
    m.accepted += accepted ? 1 : 0;
    m.add(accepted ? own : 0.0);
  }
  return m;
}

}  // namespace

StepOutcome simulate_step(const env::DistributionSpec& spec, const voting::VotingRule& rule,
                          RngStream& stream) {
  const env::Sampler sampler(spec);
  StepOutcome out;
  out.increments.resize(static_cast<std::size_t>(rule.n()));
  for (auto& z : out.increments) z = sampler(stream);
  out.accepted = voting::indicator(out.increments, rule) == 1;
  if (!out.accepted) std::fill(out.increments.begin(), out.increments.end(), 0.0);
  return out;
}

SimulationReport estimate_expected_increment(const env::DistributionSpec& spec, int n, double alpha,
                                             std::int64_t replications, std::uint64_t seed,
                                             unsigned threads) {
  if (replications < 2) throw ParameterError("replications must be at least 2");
  const voting::VotingRule rule(n, alpha);
  const env::Sampler sampler(spec);

  const std::int64_t blocks = (replications + kBlockSize - 1) / kBlockSize;
  std::vector<Moments> partial(static_cast<std::size_t>(blocks));
  std::atomic<std::int64_t> next{0};
  auto worker = [&] {
    for (std::int64_t b; (b = next.fetch_add(1)) < blocks;) {
      const std::int64_t first = b * kBlockSize;
      partial[static_cast<std::size_t>(b)] =
          run_block(sampler, rule, seed, first, std::min(first + kBlockSize, replications));
    }
  };
  const unsigned workers = std::clamp<unsigned>(threads, 1, static_cast<unsigned>(std::min<std::int64_t>(blocks, 256)));
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned i = 0; i < workers; ++i) pool.emplace_back(worker);
  }

  Moments total;
  for (const auto& m : partial) total.merge(m);

  SimulationReport report;
  report.mean_increment = total.mean;
  report.std_error = std::sqrt(total.m2 / static_cast<double>(total.count - 1)) /
                     std::sqrt(static_cast<double>(total.count));
  report.acceptance_rate = static_cast<double>(total.accepted) / static_cast<double>(total.count);
  report.replications = replications;
  report.n = n;
  report.n0 = rule.n0();
  report.alpha = alpha;
  report.seed = seed;
  return report;
}

Trajectory run_dynamics(const env::DistributionSpec& spec, int n, double alpha, int steps,
                        std::uint64_t seed) {
  if (steps < 1) throw ParameterError("steps must be at least 1");
  const voting::VotingRule rule(n, alpha);
  Trajectory t;
  t.steps = steps;
  t.n = n;
  t.utilities.assign(static_cast<std::size_t>(steps) * n, 0.0);
  t.accepted.assign(static_cast<std::size_t>(steps), 0);
  std::vector<double> current(static_cast<std::size_t>(n), 0.0);
  for (int step = 0; step < steps; ++step) {
    RngStream stream(seed, static_cast<std::uint64_t>(step));
    const auto outcome = simulate_step(spec, rule, stream);
    t.accepted[static_cast<std::size_t>(step)] = outcome.accepted ? 1 : 0;
    for (int i = 0; i < n; ++i) {
      current[static_cast<std::size_t>(i)] += outcome.increments[static_cast<std::size_t>(i)];
      t.utilities[static_cast<std::size_t>(step) * n + i] = current[static_cast<std::size_t>(i)];
    }
  }
  return t;
}

void write_trajectory_csv(std::ostream& out, const Trajectory& t) {
  out << "step";
  for (int i = 1; i <= t.n; ++i) out << ",agent_" << i;
  out << ",accepted\n";
  char buf[32];
  for (int step = 0; step < t.steps; ++step) {
    out << step + 1;
    for (int i = 0; i < t.n; ++i) {
      std::snprintf(buf, sizeof buf, "%.12g", t.utility(step, i));
      out << ',' << buf;
    }
    out << ',' << static_cast<int>(t.accepted[static_cast<std::size_t>(step)]) << '\n';
  }
}

std::string to_json(const SimulationReport& r) {
  nlohmann::ordered_json j;
  j["mean_increment"] = r.mean_increment;
  j["std_error"] = r.std_error;
  j["acceptance_rate"] = r.acceptance_rate;
  j["replications"] = r.replications;
  j["n"] = r.n;
  j["n0"] = r.n0;
  j["alpha"] = r.alpha;
  j["seed"] = r.seed;
  return j.dump();
}

}  // namespace vise::mc
