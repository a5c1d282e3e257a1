#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "fogsim/policy.hpp"
#include "fogsim/scenario.hpp"

namespace fogsim {

// Aggregated evaluation metrics for one (scenario, policy, seed) run.
struct MetricsReport {
  std::string policy;
  std::string sweep_variable;  // "arrival", "service", or "" outside sweeps
  double sweep_value = 0.0;
  std::uint64_t seed = 0;
  std::uint64_t iterations = 0;

  double avg_reward = 0.0;    // mean R(s,a) over iterations
  double avg_delay = 0.0;     // mean (t_w + t_c + t_e) / placed, seconds/task,
                              // over iterations that placed at least one task
  double avg_overload = 0.0;  // dropped / offered, the realized loss fraction

  std::uint64_t offered = 0;
  std::uint64_t placed_local = 0;
  std::uint64_t placed_remote = 0;
  std::uint64_t dropped = 0;
};

// Runs the MDP for `iterations` slots under a fixed policy (no learning).
// All randomness derives from `seed`; reports are pure functions of
// (environment, policy, iterations, seed).
MetricsReport run_episode(const FogEnvironment& env, const Policy& policy,
                          std::uint64_t iterations, std::uint64_t seed);

struct SweepRequest {
  RunConfig config;                   // base setting; swept rate is overridden
  std::uint64_t train_iterations = 0; // 0: use config.learning.max_iterations
  int jobs = 1;                       // sweep points run in parallel when > 1
};

// The rate-sweep experiment: for every (value, seed) the scenario is
// rebuilt (placement fixed per seed across policies), the Q-learning policy
// is retrained, and every policy is evaluated with a shared evaluation
// stream.  Reports come back ordered by (value, policy, seed).
std::vector<MetricsReport> sweep(const SweepRequest& request);

// Q-learning-minus-baseline deltas of the per-point seed medians.
struct ComparisonRow {
  std::string sweep_variable;
  double sweep_value = 0.0;
  std::string baseline;
  double delta_reward = 0.0;
  double delta_delay = 0.0;
  double delta_overload = 0.0;     // absolute fraction
  double delta_overload_pp = 0.0;  // percentage points (fraction * 100)
};

// Throws std::invalid_argument when reports do not share sweep coordinates.
std::vector<ComparisonRow> compare_policies(
    const std::vector<MetricsReport>& reports);

double median(std::vector<double> values);

// Seed-median of one metric for a (value, policy) cell of a report set.
double median_metric(const std::vector<MetricsReport>& reports,
                     const std::string& policy, double value,
                     double (*metric)(const MetricsReport&));

// CSV schema:
// sweep_variable,sweep_value,policy,seed,avg_reward,avg_delay,avg_overload,drop_count,iterations
void write_metrics_csv(std::ostream& os, const std::vector<MetricsReport>& reports);
std::vector<MetricsReport> read_metrics_csv(std::istream& is);
void write_comparison_csv(std::ostream& os, const std::vector<ComparisonRow>& rows);

}  // namespace fogsim
