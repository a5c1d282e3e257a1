#include "fogsim/policy.hpp"

#include <algorithm>
#include <stdexcept>

#include "fogsim/qlearning.hpp"

namespace fogsim {

namespace {

// Spill rule shared by least-queue and nearest: fill local free space first,
// then offload as much of the remainder as the target can admit.
OffloadAction spill_action(const FogEnvironment& env, const SystemState& s,
                           int target) {
  if (target == OffloadAction::kNoTarget) return OffloadAction::no_offload();
  const int local = s.requesting_node;
  const int free_local =
      std::max(0, env.node(local).queue_capacity -
                      s.queues[static_cast<std::size_t>(local - 1)]);
  const int spill = std::max(0, s.batch_size - free_local);
  const int free_target =
      std::max(0, env.node(target).queue_capacity -
                      s.queues[static_cast<std::size_t>(target - 1)]);
  const int count = std::min({spill, s.batch_size, free_target});
  if (count <= 0) return OffloadAction::no_offload();
  return OffloadAction{target, count};
}

}  // namespace

OffloadAction baseline_action(BaselineKind kind, const FogEnvironment& env,
                              const SystemState& s, RngStream& rng,
                              std::vector<OffloadAction>& scratch) {
  if (kind == BaselineKind::Random) {
    env.admissible_actions(s, scratch);
    return scratch[static_cast<std::size_t>(
        rng.uniform_int(static_cast<int>(scratch.size())))];
  }

  const int local = s.requesting_node;
  const int q_local = s.queues[static_cast<std::size_t>(local - 1)];
  int best = OffloadAction::kNoTarget;
  double best_metric = 0.0;
  for (int target = 1; target <= env.num_nodes(); ++target) {
    if (target == local) continue;
    const int q_target = s.queues[static_cast<std::size_t>(target - 1)];
    if (q_target > q_local) continue;
    const double metric =
        kind == BaselineKind::LeastQueue
            ? static_cast<double>(q_target)
            : distance(env.node(local).position, env.node(target).position);
    if (best == OffloadAction::kNoTarget || metric < best_metric) {
      best = target;
      best_metric = metric;
    }
  }
  return spill_action(env, s, best);
}

Policy Policy::qlearning_greedy(const QTable* table) {
  return Policy(Kind::QLearning, "qlearning", table);
}
Policy Policy::random() { return Policy(Kind::Random, "random", nullptr); }
Policy Policy::least_queue() {
  return Policy(Kind::LeastQueue, "least-queue", nullptr);
}
Policy Policy::nearest() { return Policy(Kind::Nearest, "nearest", nullptr); }

Policy Policy::from_name(std::string_view name, const QTable* table) {
  if (name == "qlearning") return qlearning_greedy(table);
  if (name == "random") return random();
  if (name == "least-queue") return least_queue();
  if (name == "nearest") return nearest();
  throw std::invalid_argument("unknown policy '" + std::string(name) + "'");
}

OffloadAction Policy::select(const FogEnvironment& env, const SystemState& s,
                             RngStream& rng,
                             std::vector<OffloadAction>& scratch) const {
  switch (kind_) {
    case Kind::QLearning:
      if (table_ == nullptr)
        throw std::logic_error("qlearning policy has no table attached");
      return greedy_action(env, *table_, s, scratch);
    case Kind::Random:
      return baseline_action(BaselineKind::Random, env, s, rng, scratch);
    case Kind::LeastQueue:
      return baseline_action(BaselineKind::LeastQueue, env, s, rng, scratch);
    case Kind::Nearest:
      return baseline_action(BaselineKind::Nearest, env, s, rng, scratch);
  }
  throw std::logic_error("unreachable policy kind");
}

}  // namespace fogsim
