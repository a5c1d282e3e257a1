#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "fogsim/mdp.hpp"

namespace fogsim {

// Enumerable MDP with dense state indices and per-state action lists.
class DiscreteMdp {
 public:
  virtual ~DiscreteMdp() = default;
  virtual std::size_t state_count() const = 0;
  virtual std::size_t action_count(std::size_t state) const = 0;
  virtual double reward(std::size_t state, std::size_t action) const = 0;
  // Successor distribution; probabilities sum to 1.
  virtual void transitions(std::size_t state, std::size_t action,
                           std::vector<std::pair<std::size_t, double>>& out)
      const = 0;
};

struct ValueIterationResult {
  std::vector<double> values;        // v*(s)
  std::vector<std::size_t> policy;   // greedy action index per state
  double bellman_residual = 0.0;     // sup-norm of one extra backup
  std::size_t sweeps = 0;
};

// Classic synchronous value iteration: v(s) <- max_a [r(s,a) +
// gamma * sum_s' p(s'|s,a) v(s')] until the sup-norm change drops below
// `tolerance`.
ValueIterationResult value_iteration(const DiscreteMdp& mdp, double gamma,
                                     double tolerance,
                                     std::size_t max_sweeps = 1000000);

// Exact dynamic-programming view of a FogEnvironment.  The transition law
// matches the simulator's sampler distribution for distribution:
// independent truncated-Poisson service draws per node, lambda-proportional
// choice of the next requesting node, and a Poisson batch conditioned on
// being >= 1 with all mass above W_max collapsed onto W_max.
class FogDiscreteMdp : public DiscreteMdp {
 public:
  // Throws std::length_error when the state space exceeds max_states.
  explicit FogDiscreteMdp(const FogEnvironment& env,
                          std::size_t max_states = 250000);

  std::size_t state_count() const override { return num_states_; }
  std::size_t action_count(std::size_t state) const override;
  double reward(std::size_t state, std::size_t action) const override;
  void transitions(std::size_t state, std::size_t action,
                   std::vector<std::pair<std::size_t, double>>& out) const override;

  SystemState state_at(std::size_t index) const;
  const std::vector<OffloadAction>& actions_at(std::size_t index) const;

  // Greedy action of a solved result in a given state.
  OffloadAction policy_action(const ValueIterationResult& result,
                              const SystemState& s) const;

  const FogEnvironment& env() const { return env_; }

 private:
  const FogEnvironment& env_;
  std::size_t num_states_ = 0;
  std::vector<std::vector<OffloadAction>> actions_;      // per state
  std::vector<std::vector<double>> batch_pmf_;           // per node, index 1..W_max
  std::vector<double> node_prob_;                        // next-requester pmf
};

}  // namespace fogsim
