#pragma once

// Test-only oracles, kept independent of the library code they check.

#include <cmath>
#include <cstdint>
#include <vector>

#include "fogsim/config.hpp"
#include "fogsim/scenario.hpp"

namespace testutil {

// Poisson pmf by direct evaluation of e^-l * l^k / k!.
inline double poisson_pmf(double lambda, int k) {
  double log_p = -lambda + k * std::log(lambda);
  for (int i = 2; i <= k; ++i) log_p -= std::log(static_cast<double>(i));
  return std::exp(log_p);
}

// Mean of a Poisson conditioned on being >= 1 with all mass above w_max
// collapsed onto w_max, by plain summation.
inline double truncated_poisson_mean(double lambda, int w_max) {
  const double p0 = poisson_pmf(lambda, 0);
  double mean = 0.0;
  double below = p0;
  for (int k = 1; k < w_max; ++k) {
    const double p = poisson_pmf(lambda, k);
    mean += k * p;
    below += p;
  }
  mean += w_max * (1.0 - below);
  return mean / (1.0 - p0);
}

// Chi-square statistic of observed counts against expected probabilities.
inline double chi_square_statistic(const std::vector<std::uint64_t>& observed,
                                   const std::vector<double>& expected_prob,
                                   std::uint64_t total) {
  double stat = 0.0;
  for (std::size_t i = 0; i < observed.size(); ++i) {
    const double expected = expected_prob[i] * static_cast<double>(total);
    const double diff = static_cast<double>(observed[i]) - expected;
    stat += diff * diff / expected;
  }
  return stat;
}

// Upper quantile of the chi-square distribution via the Wilson-Hilferty
// approximation; z is the standard-normal quantile (2.3263 for p = 0.99,
// 3.0 for the "3 sigma" level).
inline double chi_square_quantile(int df, double z) {
  const double d = static_cast<double>(df);
  const double c = 2.0 / (9.0 * d);
  const double t = 1.0 - c + z * std::sqrt(c);
  return d * t * t * t;
}

// A small two-node setting used across the MDP tests: reference parameters
// with nodes pinned 50 m apart.
inline fogsim::FogEnvironment make_two_node_env(int queue_capacity = 10,
                                                int w_max = 10,
                                                double lambda = 5.2,
                                                double mu = 1.8) {
  fogsim::RunConfig config;
  fogsim::TaskProfile tasks = config.task;
  std::vector<fogsim::FogNode> nodes(2);
  nodes[0] = {1, {0.0, 0.0},  mu, lambda, mu * tasks.cycles_per_task(),
              queue_capacity, 20.0};
  nodes[1] = {2, {50.0, 0.0}, mu, lambda, mu * tasks.cycles_per_task(),
              queue_capacity, 20.0};
  return fogsim::FogEnvironment(nodes, config.channel, tasks, config.weights,
                                w_max);
}

// Default-configuration environment with seeded random placement.
inline fogsim::FogEnvironment make_default_env(std::uint64_t placement_seed = 42) {
  const fogsim::RunConfig config;
  return fogsim::make_environment(fogsim::make_scenario(config, placement_seed));
}

}  // namespace testutil
