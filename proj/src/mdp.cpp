#include "fogsim/mdp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace fogsim {

void validate(const RewardWeights& weights) {
  if (weights.utility_reward <= 0.0)
    throw std::invalid_argument("weights: utility_reward must be > 0");
  if (weights.delay_weight < 0.0)
    throw std::invalid_argument("weights: delay_weight must be >= 0");
  if (weights.overload_weight < 0.0)
    throw std::invalid_argument("weights: overload_weight must be >= 0");
}

StateIndexer::StateIndexer(int num_nodes, int w_max,
                           std::vector<int> queue_capacities)
    : num_nodes_(num_nodes), w_max_(w_max), capacities_(std::move(queue_capacities)) {
  if (num_nodes_ < 1 || w_max_ < 1 ||
      capacities_.size() != static_cast<size_t>(num_nodes_))
    throw std::invalid_argument("state indexer: inconsistent dimensions");
  // state_count = N * W_max * prod(cap_i + 1), checked against overflow.
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max();
  std::uint64_t count = static_cast<std::uint64_t>(num_nodes_);
  auto mul = [&](std::uint64_t f) {
    if (f != 0 && count > limit / f)
      throw std::overflow_error("state indexer: state space exceeds 64 bits");
    count *= f;
  };
  mul(static_cast<std::uint64_t>(w_max_));
  for (int cap : capacities_) mul(static_cast<std::uint64_t>(cap) + 1);
  state_count_ = count;
}

std::uint64_t StateIndexer::encode(const SystemState& s) const {
  std::uint64_t idx = static_cast<std::uint64_t>(s.requesting_node - 1);
  idx = idx * static_cast<std::uint64_t>(w_max_) +
        static_cast<std::uint64_t>(s.batch_size - 1);
  for (int i = 0; i < num_nodes_; ++i) {
    idx = idx * (static_cast<std::uint64_t>(capacities_[static_cast<size_t>(i)]) + 1) +
          static_cast<std::uint64_t>(s.queues[static_cast<size_t>(i)]);
  }
  return idx;
}

SystemState StateIndexer::decode(std::uint64_t index) const {
  SystemState s;
  s.queues.resize(static_cast<size_t>(num_nodes_));
  for (int i = num_nodes_ - 1; i >= 0; --i) {
    const std::uint64_t radix =
        static_cast<std::uint64_t>(capacities_[static_cast<size_t>(i)]) + 1;
    s.queues[static_cast<size_t>(i)] = static_cast<int>(index % radix);
    index /= radix;
  }
  s.batch_size = static_cast<int>(index % static_cast<std::uint64_t>(w_max_)) + 1;
  index /= static_cast<std::uint64_t>(w_max_);
  s.requesting_node = static_cast<int>(index) + 1;
  return s;
}

FogEnvironment::FogEnvironment(std::vector<FogNode> nodes, ChannelModel channel,
                               TaskProfile tasks, RewardWeights weights, int w_max)
    : nodes_(std::move(nodes)),
      channel_(channel),
      tasks_(tasks),
      weights_(weights),
      w_max_(w_max) {
  if (nodes_.size() < 2)
    throw std::invalid_argument("environment: at least 2 nodes required");
  if (w_max_ < 1) throw std::invalid_argument("environment: w_max must be >= 1");
  validate(channel_);
  validate(tasks_);
  validate(weights_);
  std::vector<int> caps;
  caps.reserve(nodes_.size());
  for (size_t i = 0; i < nodes_.size(); ++i) {
    if (nodes_[i].id != static_cast<int>(i) + 1)
      throw std::invalid_argument("environment: node ids must be 1..N in order");
    validate(nodes_[i]);
    total_lambda_ += nodes_[i].lambda;
    caps.push_back(nodes_[i].queue_capacity);
  }
  indexer_ = StateIndexer(static_cast<int>(nodes_.size()), w_max_, caps);

  // Pairwise link rates are fixed by the geometry; compute them once.
  // Throws on coincident nodes (degenerate geometry).
  const int n = num_nodes();
  rate_.assign(static_cast<size_t>(n), std::vector<double>(static_cast<size_t>(n), 0.0));
  for (int i = 1; i <= n; ++i)
    for (int j = 1; j <= n; ++j)
      if (i != j)
        rate_[static_cast<size_t>(i - 1)][static_cast<size_t>(j - 1)] =
            transmission_rate(node(i), node(j), channel_);
}

double FogEnvironment::rate_bps(int src_id, int dst_id) const {
  return rate_[static_cast<size_t>(src_id - 1)][static_cast<size_t>(dst_id - 1)];
}

bool FogEnvironment::is_valid_state(const SystemState& s) const {
  if (s.requesting_node < 1 || s.requesting_node > num_nodes()) return false;
  if (s.batch_size < 1 || s.batch_size > w_max_) return false;
  if (s.queues.size() != nodes_.size()) return false;
  for (size_t i = 0; i < nodes_.size(); ++i)
    if (s.queues[i] < 0 || s.queues[i] > nodes_[i].queue_capacity) return false;
  return true;
}

void FogEnvironment::admissible_actions(const SystemState& s,
                                        std::vector<OffloadAction>& out) const {
  out.clear();
  out.push_back(OffloadAction::no_offload());
  const int local = s.requesting_node;
  const int q_local = s.queues[static_cast<size_t>(local - 1)];
  for (int target = 1; target <= num_nodes(); ++target) {
    if (target == local) continue;
    const int q_target = s.queues[static_cast<size_t>(target - 1)];
    if (q_target > q_local) continue;  // only equally or less loaded neighbors
    const int free = std::max(0, node(target).queue_capacity - q_target);
    const int cap = std::min(s.batch_size, free);
    for (int count = 1; count <= cap; ++count)
      out.push_back(OffloadAction{target, count});
  }
}

std::vector<OffloadAction> FogEnvironment::admissible_actions(
    const SystemState& s) const {
  std::vector<OffloadAction> out;
  admissible_actions(s, out);
  return out;
}

bool FogEnvironment::is_admissible(const SystemState& s,
                                   const OffloadAction& a) const {
  if (!a.is_offload()) return a.offload_count == 0;
  if (a.target_node < 1 || a.target_node > num_nodes()) return false;
  if (a.target_node == s.requesting_node) return false;
  const int q_local = s.queues[static_cast<size_t>(s.requesting_node - 1)];
  const int q_target = s.queues[static_cast<size_t>(a.target_node - 1)];
  if (q_target > q_local) return false;
  const int free = std::max(0, node(a.target_node).queue_capacity - q_target);
  return a.offload_count >= 1 &&
         a.offload_count <= std::min(s.batch_size, free);
}

int FogEnvironment::local_split(const SystemState& s,
                                const OffloadAction& a) const {
  const int local = s.requesting_node;
  const int free =
      std::max(0, node(local).queue_capacity - s.queues[static_cast<size_t>(local - 1)]);
  return std::min(s.batch_size - a.offload_count, free);
}

double FogEnvironment::next_queue_estimate(double queue, double mu, int placed,
                                           int cap) {
  return std::min(std::max(0.0, queue - mu) + static_cast<double>(placed),
                  static_cast<double>(cap));
}

double FogEnvironment::overload_probability(const FogNode& node, double q_next) {
  const double free = static_cast<double>(node.queue_capacity) - q_next;
  return std::max(0.0, node.lambda - free) / node.lambda;
}

RewardBreakdown FogEnvironment::reward(const SystemState& s,
                                       const OffloadAction& a) const {
  RewardBreakdown r;
  const int w_local = local_split(s, a);
  const int w_off = a.offload_count;
  const int placed = w_local + w_off;
  if (placed == 0) return r;  // nothing allocated: all components zero

  const FogNode& local = node(s.requesting_node);
  const double q_local = static_cast<double>(s.queues[static_cast<size_t>(local.id - 1)]);

  r.utility = weights_.utility_reward * std::log1p(static_cast<double>(placed));

  if (a.is_offload()) {
    const FogNode& remote = node(a.target_node);
    const double q_remote =
        static_cast<double>(s.queues[static_cast<size_t>(remote.id - 1)]);
    r.t_wait = wait_time(w_local, w_off, q_local, q_remote, local.mu, remote.mu);
    r.t_comm = comm_time(w_off, rate_bps(local.id, remote.id), tasks_);
    r.t_exec = exec_time(w_local, w_off, local, remote, tasks_);
    const double est_remote =
        next_queue_estimate(q_remote, remote.mu, w_off, remote.queue_capacity);
    const double est_local =
        next_queue_estimate(q_local, local.mu, w_local, local.queue_capacity);
    r.overload = weights_.overload_weight *
                 (w_local * overload_probability(local, est_local) +
                  w_off * overload_probability(remote, est_remote)) /
                 static_cast<double>(placed);
  } else {
    r.t_wait = wait_time(w_local, 0, q_local, 0.0, local.mu, local.mu);
    r.t_exec = exec_time(w_local, 0, local, local, tasks_);
    const double est_local =
        next_queue_estimate(q_local, local.mu, w_local, local.queue_capacity);
    r.overload = weights_.overload_weight * overload_probability(local, est_local);
  }

  r.delay = weights_.delay_weight * (r.t_wait + r.t_comm + r.t_exec) /
            static_cast<double>(placed);
  r.total = r.utility - (r.delay + r.overload);
  return r;
}

int FogEnvironment::sample_next_node(RngStream& rng) const {
  const double u = rng.uniform01() * total_lambda_;
  double acc = 0.0;
  for (size_t i = 0; i < nodes_.size(); ++i) {
    acc += nodes_[i].lambda;
    if (u < acc) return static_cast<int>(i) + 1;
  }
  return static_cast<int>(nodes_.size());  // guard against rounding at u ~ total
}

int FogEnvironment::sample_batch(double lambda, RngStream& rng) const {
  int draw = 0;
  do {
    draw = rng.poisson(lambda);
  } while (draw == 0);  // batch sizes start at 1: resample on zero
  return std::min(draw, w_max_);
}

SystemState FogEnvironment::sample_transition(const SystemState& s,
                                              const OffloadAction& a,
                                              RngStream& rng) const {
  const int w_local = local_split(s, a);
  SystemState next;
  next.queues.resize(nodes_.size());
  // Draw order is fixed (service per node in id order, then requesting node,
  // then batch) so a seed pins the whole trajectory.
  for (size_t i = 0; i < nodes_.size(); ++i) {
    const int q = s.queues[i];
    const int served = std::min(rng.poisson(nodes_[i].mu), q);
    int placed = 0;
    if (static_cast<int>(i) + 1 == s.requesting_node) placed = w_local;
    if (static_cast<int>(i) + 1 == a.target_node) placed = a.offload_count;
    next.queues[i] = std::min(q - served + placed, nodes_[i].queue_capacity);
  }
  next.requesting_node = sample_next_node(rng);
  next.batch_size =
      sample_batch(node(next.requesting_node).lambda, rng);
  return next;
}

StepOutcome FogEnvironment::step(const SystemState& s, const OffloadAction& a,
                                 RngStream& rng) const {
  StepOutcome out;
  out.placed_local = local_split(s, a);
  out.placed_remote = a.offload_count;
  out.dropped = s.batch_size - out.placed_local - out.placed_remote;
  out.reward = reward(s, a);
  out.next = sample_transition(s, a, rng);
  return out;
}

SystemState FogEnvironment::initial_state() const {
  SystemState s;
  s.requesting_node = 1;
  s.batch_size = 1;
  s.queues.assign(nodes_.size(), 0);
  return s;
}

}  // namespace fogsim
