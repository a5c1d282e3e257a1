#include "fogsim/qlearning.hpp"

#include <stdexcept>

namespace fogsim {

void validate(const LearningConfig& cfg) {
  if (!(cfg.learning_rate > 0.0 && cfg.learning_rate < 1.0))
    throw std::invalid_argument("learning: alpha must be in (0, 1)");
  if (!(cfg.discount > 0.0 && cfg.discount < 1.0))
    throw std::invalid_argument("learning: gamma must be in (0, 1)");
  if (!(cfg.epsilon_start >= 0.0 && cfg.epsilon_start <= 1.0))
    throw std::invalid_argument("learning: epsilon_start must be in [0, 1]");
  if (!(cfg.epsilon_end >= 0.0 && cfg.epsilon_end <= 1.0))
    throw std::invalid_argument("learning: epsilon_end must be in [0, 1]");
  if (cfg.epsilon_start < cfg.epsilon_end)
    throw std::invalid_argument("learning: epsilon_start must be >= epsilon_end");
}

double epsilon_at(const LearningConfig& cfg, std::uint64_t it) {
  if (cfg.max_iterations <= 1) return cfg.epsilon_start;
  const double t = static_cast<double>(it) /
                   static_cast<double>(cfg.max_iterations - 1);
  return cfg.epsilon_start + (cfg.epsilon_end - cfg.epsilon_start) * t;
}

OffloadAction greedy_action(const FogEnvironment& env, const QTable& table,
                            const SystemState& s,
                            std::vector<OffloadAction>& scratch) {
  env.admissible_actions(s, scratch);
  OffloadAction best = scratch.front();
  double best_value = table.value(s, best);
  // Canonical enumeration order + strict improvement = lexicographic
  // tie-breaking, so argmax is deterministic.
  for (std::size_t i = 1; i < scratch.size(); ++i) {
    const double v = table.value(s, scratch[i]);
    if (v > best_value) {
      best_value = v;
      best = scratch[i];
    }
  }
  return best;
}

OffloadAction epsilon_greedy(const FogEnvironment& env, const QTable& table,
                             const SystemState& s, double eps, RngStream& rng,
                             std::vector<OffloadAction>& scratch) {
  if (rng.uniform01() < eps) {
    env.admissible_actions(s, scratch);
    return scratch[static_cast<std::size_t>(
        rng.uniform_int(static_cast<int>(scratch.size())))];
  }
  return greedy_action(env, table, s, scratch);
}

double max_action_value(const FogEnvironment& env, const QTable& table,
                        const SystemState& s,
                        std::vector<OffloadAction>& scratch) {
  env.admissible_actions(s, scratch);
  double best = table.value(s, scratch.front());
  for (std::size_t i = 1; i < scratch.size(); ++i)
    best = std::max(best, table.value(s, scratch[i]));
  return best;
}

double q_update(QTable& table, const FogEnvironment& env, const SystemState& s,
                const OffloadAction& a, double reward_value,
                const SystemState& next, const LearningConfig& cfg,
                std::vector<OffloadAction>& scratch) {
  const double target =
      reward_value + cfg.discount * max_action_value(env, table, next, scratch);
  QTable::Entry& e = table.entry(s, a);
  e.value = (1.0 - cfg.learning_rate) * e.value + cfg.learning_rate * target;
  e.visits += 1;
  return e.value;
}

TrainResult train(const FogEnvironment& env, const LearningConfig& cfg,
                  const TrainOptions& options) {
  validate(cfg);
  TrainResult result{QTable(env), {}};
  if (options.warm_start != nullptr) result.table = *options.warm_start;
  if (options.record_trace && cfg.max_iterations > 0)
    result.trace.reserve(static_cast<std::size_t>(cfg.max_iterations));

  RngStream rng(cfg.seed);
  std::vector<OffloadAction> scratch;
  SystemState state = env.initial_state();

  for (std::uint64_t it = 0; it < cfg.max_iterations; ++it) {
    if (options.stop != nullptr && options.stop->load()) break;
    const double eps = epsilon_at(cfg, it);
    const OffloadAction action =
        epsilon_greedy(env, result.table, state, eps, rng, scratch);
    const StepOutcome outcome = env.step(state, action, rng);
    q_update(result.table, env, state, action, outcome.reward.total,
             outcome.next, cfg, scratch);
    if (options.record_trace)
      result.trace.push_back(TraceRow{it, outcome.reward.total,
                                      outcome.reward.delay,
                                      outcome.reward.overload, outcome.dropped});
    state = outcome.next;
  }
  return result;
}

}  // namespace fogsim
