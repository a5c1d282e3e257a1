#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "fogsim/qtable.hpp"

namespace fogsim {

enum class BaselineKind { Random, LeastQueue, Nearest };

// Benchmark action rules.
//   random:      uniform draw from A(s)
//   least-queue: offload the batch's local spill to the admissible node
//                with the smallest queue (lowest id on ties)
//   nearest:     same spill rule, target = closest admissible node
// When no admissible target exists (or there is no spill), all three reduce
// to the pure-local action.
OffloadAction baseline_action(BaselineKind kind, const FogEnvironment& env,
                              const SystemState& s, RngStream& rng,
                              std::vector<OffloadAction>& scratch);

// A fixed decision rule for evaluation runs.  Q-learning evaluation is pure
// greedy over a frozen table (no exploration, no updates).
class Policy {
 public:
  static Policy qlearning_greedy(const QTable* table);
  static Policy random();
  static Policy least_queue();
  static Policy nearest();

  // Accepts "qlearning", "random", "least-queue", "nearest".
  static Policy from_name(std::string_view name, const QTable* table = nullptr);

  OffloadAction select(const FogEnvironment& env, const SystemState& s,
                       RngStream& rng, std::vector<OffloadAction>& scratch) const;

  const std::string& name() const { return name_; }
  bool needs_table() const { return kind_ == Kind::QLearning; }
  void attach_table(const QTable* table) { table_ = table; }

 private:
  enum class Kind { QLearning, Random, LeastQueue, Nearest };
  Policy(Kind kind, std::string name, const QTable* table)
      : kind_(kind), name_(std::move(name)), table_(table) {}

  Kind kind_;
  std::string name_;
  const QTable* table_ = nullptr;
};

}  // namespace fogsim
