#pragma once

#include <cstdint>
#include <vector>

#include "fogsim/model.hpp"
#include "fogsim/rng.hpp"

namespace fogsim {

// MDP state: the node whose request is being allocated this slot, the size
// of that batch, and every node's current queue length.
struct SystemState {
  int requesting_node = 1;   // n^l, 1..N
  int batch_size = 1;        // w, 1..W_max
  std::vector<int> queues;   // Q_i, 0..cap_i, indexed by node id - 1

  bool operator==(const SystemState&) const = default;
};

// MDP action: offload `offload_count` tasks of the current batch to
// `target_node`.  The pure-local action is encoded as target 0 / count 0;
// it is the only action with a zero count.
struct OffloadAction {
  static constexpr int kNoTarget = 0;

  int target_node = kNoTarget;  // n^o, 1..N (never the requesting node)
  int offload_count = 0;        // w^o

  bool is_offload() const { return target_node != kNoTarget; }
  static OffloadAction no_offload() { return {}; }

  bool operator==(const OffloadAction&) const = default;
  // Canonical ordering used for deterministic tie-breaking.
  friend bool operator<(const OffloadAction& a, const OffloadAction& b) {
    if (a.target_node != b.target_node) return a.target_node < b.target_node;
    return a.offload_count < b.offload_count;
  }
};

struct RewardWeights {
  double utility_reward = 10.0;    // r_u
  double delay_weight = 1.0;       // chi_d
  double overload_weight = 150.0;  // chi_o

  bool operator==(const RewardWeights&) const = default;
};

void validate(const RewardWeights& weights);

// One transition's reward, split into its components.  total is always
// utility - (delay + overload); the timing terms are the raw seconds that
// fed the delay component.
struct RewardBreakdown {
  double utility = 0.0;
  double delay = 0.0;
  double overload = 0.0;
  double t_wait = 0.0;
  double t_comm = 0.0;
  double t_exec = 0.0;
  double total = 0.0;
};

// Result of advancing the simulation one slot.
struct StepOutcome {
  SystemState next;
  RewardBreakdown reward;
  int placed_local = 0;   // w^l
  int placed_remote = 0;  // w^o
  int dropped = 0;        // batch tasks that fit nowhere
};

// Dense mixed-radix encoding of SystemState as a 64-bit index, ordered so
// that sorting indices sorts states lexicographically by
// (requesting_node, batch_size, Q_1, ..., Q_N).
class StateIndexer {
 public:
  StateIndexer() = default;
  StateIndexer(int num_nodes, int w_max, std::vector<int> queue_capacities);

  std::uint64_t encode(const SystemState& s) const;
  SystemState decode(std::uint64_t index) const;
  std::uint64_t state_count() const { return state_count_; }
  int num_nodes() const { return num_nodes_; }
  int w_max() const { return w_max_; }

 private:
  int num_nodes_ = 0;
  int w_max_ = 0;
  std::vector<int> capacities_;
  std::uint64_t state_count_ = 0;
};

// The offloading MDP over a fixed set of fog nodes.  Pure functions of the
// inputs except sample_transition/step, which consume the caller's stream.
class FogEnvironment {
 public:
  FogEnvironment(std::vector<FogNode> nodes, ChannelModel channel,
                 TaskProfile tasks, RewardWeights weights, int w_max);

  // A(s): the pure-local action plus every (target, count) with
  // target != n^l, Q_target <= Q_{n^l} and 1 <= count <= min(w, free space
  // at the target).  Canonical order: no-offload first, then targets
  // ascending, counts ascending.  Never empty.
  void admissible_actions(const SystemState& s,
                          std::vector<OffloadAction>& out) const;
  std::vector<OffloadAction> admissible_actions(const SystemState& s) const;
  bool is_admissible(const SystemState& s, const OffloadAction& a) const;

  // w^l: how many of the batch run locally once the offload share and the
  // local free queue space are accounted for.  The remainder is dropped.
  int local_split(const SystemState& s, const OffloadAction& a) const;

  // Estimated next queue length under fractional mean service (reward-side
  // planning signal, not the simulation-time integer update).
  static double next_queue_estimate(double queue, double mu, int placed, int cap);

  // Probability that the arrivals expected at `node` exceed its estimated
  // free queue space.  Always in [0, 1].
  static double overload_probability(const FogNode& node, double q_next);

  RewardBreakdown reward(const SystemState& s, const OffloadAction& a) const;

  // Samples the next state: every node serves an integer Poisson draw
  // truncated at its queue, placements are added and clipped at capacity,
  // then the next requesting node (probability proportional to lambda_i)
  // and its batch (Poisson truncated to [1, W_max]) are drawn.
  SystemState sample_transition(const SystemState& s, const OffloadAction& a,
                                RngStream& rng) const;

  // reward + sample_transition + placement bookkeeping in one call.
  StepOutcome step(const SystemState& s, const OffloadAction& a,
                   RngStream& rng) const;

  // Algorithm start state: node 1 requesting a batch of 1, all queues empty.
  SystemState initial_state() const;

  bool is_valid_state(const SystemState& s) const;

  int sample_next_node(RngStream& rng) const;                  // 1-based
  int sample_batch(double lambda, RngStream& rng) const;       // [1, W_max]

  int num_nodes() const { return static_cast<int>(nodes_.size()); }
  int w_max() const { return w_max_; }
  const FogNode& node(int id) const { return nodes_[static_cast<size_t>(id - 1)]; }
  const std::vector<FogNode>& nodes() const { return nodes_; }
  const ChannelModel& channel() const { return channel_; }
  const TaskProfile& tasks() const { return tasks_; }
  const RewardWeights& weights() const { return weights_; }
  const StateIndexer& indexer() const { return indexer_; }
  double rate_bps(int src_id, int dst_id) const;
  double total_lambda() const { return total_lambda_; }

 private:
  std::vector<FogNode> nodes_;
  ChannelModel channel_;
  TaskProfile tasks_;
  RewardWeights weights_;
  int w_max_ = 0;
  double total_lambda_ = 0.0;
  std::vector<std::vector<double>> rate_;  // pairwise link rates, bits/s
  StateIndexer indexer_;
};

}  // namespace fogsim
