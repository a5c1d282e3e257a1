#pragma once

#include <cstdint>

#include "fogsim/config.hpp"
#include "fogsim/mdp.hpp"

namespace fogsim {

// A fully instantiated simulation setting: concrete nodes (with positions),
// channel, workload shape and reward weights.
struct Scenario {
  std::vector<FogNode> nodes;
  ChannelModel channel;
  TaskProfile tasks;
  RewardWeights weights;
  double area_width_m = 100.0;
  double area_height_m = 100.0;
  int w_max = 10;
  std::uint64_t placement_seed = 0;
};

void validate(const Scenario& scenario);

// Instantiates the config's nodes with uniform random placement in the
// deployment area (redrawing near-coincident positions).  CPU speed is tied
// to the service rate: f_i = mu_i * instructions * cpi, so executing one
// task takes exactly 1/mu_i seconds.
Scenario make_scenario(const RunConfig& config, std::uint64_t placement_seed);

FogEnvironment make_environment(const Scenario& scenario);

}  // namespace fogsim
