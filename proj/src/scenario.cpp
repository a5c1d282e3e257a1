#include "fogsim/scenario.hpp"

#include <cmath>
#include <stdexcept>

#include "fogsim/rng.hpp"

namespace fogsim {

void validate(const Scenario& scenario) {
  if (scenario.nodes.size() < 2)
    throw std::invalid_argument("scenario: at least 2 nodes required");
  if (scenario.w_max < 1)
    throw std::invalid_argument("scenario: w_max must be >= 1");
  for (const FogNode& node : scenario.nodes) {
    validate(node);
    if (node.position.x < 0.0 || node.position.x > scenario.area_width_m ||
        node.position.y < 0.0 || node.position.y > scenario.area_height_m)
      throw std::invalid_argument("scenario: node " + std::to_string(node.id) +
                                  " lies outside the deployment area");
  }
  validate(scenario.channel);
  validate(scenario.tasks);
  validate(scenario.weights);
}

Scenario make_scenario(const RunConfig& config, std::uint64_t placement_seed) {
  validate(config);
  Scenario scenario;
  scenario.channel = config.channel;
  scenario.tasks = config.task;
  scenario.weights = config.weights;
  scenario.area_width_m = config.area_width_m;
  scenario.area_height_m = config.area_height_m;
  scenario.w_max = config.w_max;
  scenario.placement_seed = placement_seed;

  const auto lambdas = resolved_arrival_rates(config);
  const auto mus = resolved_service_rates(config);
  const auto powers = resolved_tx_powers(config);

  RngStream rng(derive_seed(placement_seed, "placement"));
  constexpr double kMinSeparation = 1e-3;  // meters; avoids degenerate links
  scenario.nodes.reserve(static_cast<std::size_t>(config.num_nodes));
  for (int i = 0; i < config.num_nodes; ++i) {
    Point2D pos;
    bool ok = false;
    while (!ok) {
      pos.x = rng.uniform01() * scenario.area_width_m;
      pos.y = rng.uniform01() * scenario.area_height_m;
      ok = true;
      for (const FogNode& other : scenario.nodes)
        if (distance(pos, other.position) < kMinSeparation) ok = false;
    }
    FogNode node;
    node.id = i + 1;
    node.position = pos;
    node.lambda = lambdas[static_cast<std::size_t>(i)];
    node.mu = mus[static_cast<std::size_t>(i)];
    node.cpu_speed_hz = node.mu * config.task.cycles_per_task();
    node.queue_capacity = config.queue_capacity;
    node.tx_power_dbm = powers[static_cast<std::size_t>(i)];
    scenario.nodes.push_back(node);
  }
  validate(scenario);
  return scenario;
}

FogEnvironment make_environment(const Scenario& scenario) {
  return FogEnvironment(scenario.nodes, scenario.channel, scenario.tasks,
                        scenario.weights, scenario.w_max);
}

}  // namespace fogsim
