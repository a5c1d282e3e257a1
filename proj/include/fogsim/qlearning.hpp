#pragma once

#include <atomic>
#include <cstdint>
#include <vector>

#include "fogsim/qtable.hpp"

namespace fogsim {

struct LearningConfig {
  double learning_rate = 0.5;   // alpha, in (0, 1)
  double discount = 0.5;        // gamma, in (0, 1)
  double epsilon_start = 0.9;   // exploration probability at iteration 0
  double epsilon_end = 0.7;     // exploration probability at the last iteration
  std::uint64_t max_iterations = 500000;
  std::uint64_t seed = 1;

  bool operator==(const LearningConfig&) const = default;
};

void validate(const LearningConfig& cfg);

// Exploration probability at iteration `it` of `total`: linear interpolation
// from epsilon_start to epsilon_end.
double epsilon_at(const LearningConfig& cfg, std::uint64_t it);

struct TraceRow {
  std::uint64_t iteration = 0;
  double reward = 0.0;    // R(s,a) of the transition taken
  double delay = 0.0;     // weighted delay component D(s,a)
  double overload = 0.0;  // weighted overload component O(s,a)
  int dropped = 0;        // tasks of the batch that fit nowhere
};

struct TrainResult {
  QTable table;
  std::vector<TraceRow> trace;
};

struct TrainOptions {
  bool record_trace = true;
  const QTable* warm_start = nullptr;       // optional initial table
  const std::atomic<bool>* stop = nullptr;  // early stop; table returned as-is
};

// Greedy argmax over A(s); ties break toward the canonically smallest
// action (no-offload, then lowest target id, then lowest count).
OffloadAction greedy_action(const FogEnvironment& env, const QTable& table,
                            const SystemState& s,
                            std::vector<OffloadAction>& scratch);

// With probability eps, a uniform draw from A(s); otherwise the greedy
// argmax.  One uniform01 is always consumed for the explore/exploit choice.
OffloadAction epsilon_greedy(const FogEnvironment& env, const QTable& table,
                             const SystemState& s, double eps, RngStream& rng,
                             std::vector<OffloadAction>& scratch);

double max_action_value(const FogEnvironment& env, const QTable& table,
                        const SystemState& s,
                        std::vector<OffloadAction>& scratch);

// One temporal-difference backup:
//   Q(s,a) <- (1-alpha) Q(s,a) + alpha (r + gamma max_{a'} Q(s',a'))
// Increments the visit count and returns the new estimate.
double q_update(QTable& table, const FogEnvironment& env, const SystemState& s,
                const OffloadAction& a, double reward_value,
                const SystemState& next, const LearningConfig& cfg,
                std::vector<OffloadAction>& scratch);

// The learning loop: start from (node 1, batch 1, empty queues), act
// epsilon-greedily with a linearly annealed epsilon, update after every
// transition.
TrainResult train(const FogEnvironment& env, const LearningConfig& cfg,
                  const TrainOptions& options = {});

}  // namespace fogsim
