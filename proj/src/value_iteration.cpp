#include "fogsim/value_iteration.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <unordered_map>

namespace fogsim {

ValueIterationResult value_iteration(const DiscreteMdp& mdp, double gamma,
                                     double tolerance, std::size_t max_sweeps) {
  if (gamma < 0.0 || gamma >= 1.0)
    throw std::invalid_argument("value_iteration: gamma must be in [0, 1)");
  if (tolerance <= 0.0)
    throw std::invalid_argument("value_iteration: tolerance must be positive");

  const std::size_t n = mdp.state_count();
  ValueIterationResult result;
  result.values.assign(n, 0.0);
  result.policy.assign(n, 0);

  std::vector<double> next(n, 0.0);
  std::vector<std::pair<std::size_t, double>> succ;

  auto backup = [&](const std::vector<double>& v, std::size_t s,
                    std::size_t* argmax) {
    const std::size_t actions = mdp.action_count(s);
    double best = -std::numeric_limits<double>::infinity();
    std::size_t best_a = 0;
    for (std::size_t a = 0; a < actions; ++a) {
      double q = mdp.reward(s, a);
      if (gamma > 0.0) {
        mdp.transitions(s, a, succ);
        double expected = 0.0;
        for (const auto& [sp, p] : succ) expected += p * v[sp];
        q += gamma * expected;
      }
      if (q > best) {
        best = q;
        best_a = a;
      }
    }
    if (argmax != nullptr) *argmax = best_a;
    return best;
  };

  double delta = 0.0;
  for (result.sweeps = 0; result.sweeps < max_sweeps; ++result.sweeps) {
    delta = 0.0;
    for (std::size_t s = 0; s < n; ++s) {
      next[s] = backup(result.values, s, nullptr);
      delta = std::max(delta, std::abs(next[s] - result.values[s]));
    }
    result.values.swap(next);
    if (delta < tolerance) break;
  }
  if (delta >= tolerance)
    throw std::runtime_error("value_iteration: did not converge");

  // Extract the greedy policy and report the residual of one more backup.
  result.bellman_residual = 0.0;
  for (std::size_t s = 0; s < n; ++s) {
    const double v = backup(result.values, s, &result.policy[s]);
    result.bellman_residual =
        std::max(result.bellman_residual, std::abs(v - result.values[s]));
  }
  return result;
}

namespace {

// pmf of Poisson(lambda) for k = 0..n, by the multiplicative recurrence.
std::vector<double> poisson_pmf(double lambda, int n) {
  std::vector<double> pmf(static_cast<std::size_t>(n) + 1);
  pmf[0] = std::exp(-lambda);
  for (int k = 1; k <= n; ++k)
    pmf[static_cast<std::size_t>(k)] =
        pmf[static_cast<std::size_t>(k - 1)] * lambda / static_cast<double>(k);
  return pmf;
}

}  // namespace

FogDiscreteMdp::FogDiscreteMdp(const FogEnvironment& env, std::size_t max_states)
    : env_(env) {
  const std::uint64_t count = env_.indexer().state_count();
  if (count > max_states)
    throw std::length_error(
        "fog mdp: state space too large to enumerate (" + std::to_string(count) +
        " states, limit " + std::to_string(max_states) + ")");
  num_states_ = static_cast<std::size_t>(count);

  actions_.resize(num_states_);
  for (std::size_t s = 0; s < num_states_; ++s)
    actions_[s] = env_.admissible_actions(env_.indexer().decode(s));

  // Batch pmf per node: Poisson conditioned on >= 1, mass >= W_max pooled
  // onto W_max.  This is exactly the law of the sampler's
  // resample-on-zero / clip procedure.
  const int w_max = env_.w_max();
  batch_pmf_.resize(env_.nodes().size());
  node_prob_.resize(env_.nodes().size());
  for (std::size_t i = 0; i < env_.nodes().size(); ++i) {
    const double lambda = env_.nodes()[i].lambda;
    const auto pmf = poisson_pmf(lambda, w_max);
    std::vector<double> batch(static_cast<std::size_t>(w_max) + 1, 0.0);
    const double denom = 1.0 - pmf[0];
    double below = 0.0;
    for (int k = 1; k < w_max; ++k) {
      batch[static_cast<std::size_t>(k)] = pmf[static_cast<std::size_t>(k)] / denom;
      below += pmf[static_cast<std::size_t>(k)];
    }
    batch[static_cast<std::size_t>(w_max)] = (denom - below) / denom;
    batch_pmf_[i] = std::move(batch);
    node_prob_[i] = lambda / env_.total_lambda();
  }
}

std::size_t FogDiscreteMdp::action_count(std::size_t state) const {
  return actions_[state].size();
}

double FogDiscreteMdp::reward(std::size_t state, std::size_t action) const {
  return env_.reward(env_.indexer().decode(state), actions_[state][action]).total;
}

SystemState FogDiscreteMdp::state_at(std::size_t index) const {
  return env_.indexer().decode(index);
}

const std::vector<OffloadAction>& FogDiscreteMdp::actions_at(
    std::size_t index) const {
  return actions_[index];
}

OffloadAction FogDiscreteMdp::policy_action(const ValueIterationResult& result,
                                            const SystemState& s) const {
  const std::size_t idx = static_cast<std::size_t>(env_.indexer().encode(s));
  return actions_[idx][result.policy[idx]];
}

void FogDiscreteMdp::transitions(
    std::size_t state, std::size_t action,
    std::vector<std::pair<std::size_t, double>>& out) const {
  const SystemState s = env_.indexer().decode(state);
  const OffloadAction a = actions_[state][action];
  const int n = env_.num_nodes();
  const int w_local = env_.local_split(s, a);

  // Per-node service distribution: served = min(Poisson(mu), Q), so the
  // probability of serving the whole queue is the Poisson upper tail.
  std::vector<std::vector<double>> service(static_cast<std::size_t>(n));
  std::vector<int> placed(static_cast<std::size_t>(n), 0);
  placed[static_cast<std::size_t>(s.requesting_node - 1)] = w_local;
  if (a.is_offload())
    placed[static_cast<std::size_t>(a.target_node - 1)] = a.offload_count;
  for (int i = 0; i < n; ++i) {
    const int q = s.queues[static_cast<std::size_t>(i)];
    const auto pmf = poisson_pmf(env_.nodes()[static_cast<std::size_t>(i)].mu, q);
    std::vector<double> dist(static_cast<std::size_t>(q) + 1);
    double below = 0.0;
    for (int k = 0; k < q; ++k) {
      dist[static_cast<std::size_t>(k)] = pmf[static_cast<std::size_t>(k)];
      below += pmf[static_cast<std::size_t>(k)];
    }
    dist[static_cast<std::size_t>(q)] = 1.0 - below;
    service[static_cast<std::size_t>(i)] = std::move(dist);
  }

  std::unordered_map<std::uint64_t, double> acc;
  std::vector<int> served(static_cast<std::size_t>(n), 0);

  // Enumerate the product of per-node service draws, then the next
  // requesting node and its batch.
  auto recurse = [&](auto&& self, int i, double prob) -> void {
    if (prob == 0.0) return;
    if (i == n) {
      SystemState next;
      next.queues.resize(static_cast<std::size_t>(n));
      for (int j = 0; j < n; ++j) {
        const std::size_t sj = static_cast<std::size_t>(j);
        next.queues[sj] =
            std::min(s.queues[sj] - served[sj] + placed[sj],
                     env_.nodes()[sj].queue_capacity);
      }
      for (int node = 1; node <= n; ++node) {
        next.requesting_node = node;
        const auto& batch = batch_pmf_[static_cast<std::size_t>(node - 1)];
        for (int w = 1; w <= env_.w_max(); ++w) {
          const double p_batch = batch[static_cast<std::size_t>(w)];
          if (p_batch == 0.0) continue;
          next.batch_size = w;
          acc[env_.indexer().encode(next)] +=
              prob * node_prob_[static_cast<std::size_t>(node - 1)] * p_batch;
        }
      }
      return;
    }
    const auto& dist = service[static_cast<std::size_t>(i)];
    for (int k = 0; k < static_cast<int>(dist.size()); ++k) {
      served[static_cast<std::size_t>(i)] = k;
      self(self, i + 1, prob * dist[static_cast<std::size_t>(k)]);
    }
  };
  recurse(recurse, 0, 1.0);

  out.clear();
  out.reserve(acc.size());
  for (const auto& [idx, p] : acc)
    out.emplace_back(static_cast<std::size_t>(idx), p);
  // Sorted successors give a fixed floating-point summation order.
  std::sort(out.begin(), out.end());
}

}  // namespace fogsim
