#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fogsim/mdp.hpp"
#include "fogsim/qlearning.hpp"

namespace fogsim {

struct SweepSpec {
  std::string variable = "arrival";  // "arrival" | "service"
  std::vector<double> values = {1, 2, 3, 4, 5, 6, 7, 8, 9};

  bool operator==(const SweepSpec&) const = default;
};

// Full experiment configuration.  The defaults reproduce the reference
// simulation settings: 5 nodes, queue capacity 10, alpha = gamma = 0.5,
// 500 Mbyte tasks, 200e6 instructions at CPI 5, 2 MHz bandwidth, path loss
// (1e-3, 4), 20 dBm transmit power, weights (1, 150), utility reward 10,
// epsilon annealed from 0.9 to 0.7.
struct RunConfig {
  int num_nodes = 5;
  int queue_capacity = 10;
  int w_max = 10;

  double arrival_rate = 5.2;                 // homogeneous lambda
  std::vector<double> arrival_rates;         // optional per-node override
  double service_rate = 1.8;                 // homogeneous mu
  std::vector<double> service_rates;         // optional per-node override
  double tx_power_dbm = 20.0;
  std::vector<double> tx_powers_dbm;         // optional per-node override

  double area_width_m = 100.0;
  double area_height_m = 100.0;

  TaskProfile task;        // data_size_bits = 4e9 (500 decimal Mbytes)
  ChannelModel channel;
  RewardWeights weights;
  LearningConfig learning;

  std::uint64_t eval_iterations = 20000;
  std::vector<std::uint64_t> seeds = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
  SweepSpec sweep;
  std::vector<std::string> policies = {"qlearning", "random", "least-queue",
                                       "nearest"};
  std::string output_dir = "out";
  std::uint64_t seed = 1;  // root seed; all streams derive from it

  bool operator==(const RunConfig&) const = default;
};

// Thrown on parse errors, range violations and unknown keys; the message
// names the offending field.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& message)
      : std::runtime_error(message) {}
};

RunConfig load_config(const std::string& path);
RunConfig parse_config(const std::string& json_text);
std::string write_config(const RunConfig& config);  // JSON, round-trips exactly
void validate(const RunConfig& config);

// Resolved per-node rate helpers (scalar default or per-node vector).
std::vector<double> resolved_arrival_rates(const RunConfig& config);
std::vector<double> resolved_service_rates(const RunConfig& config);
std::vector<double> resolved_tx_powers(const RunConfig& config);

}  // namespace fogsim
