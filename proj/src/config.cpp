#include "fogsim/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace fogsim {

namespace {

using nlohmann::json;

void reject_unknown_keys(const json& obj, const std::string& where,
                         const std::set<std::string>& allowed) {
  for (const auto& [key, _] : obj.items())
    if (!allowed.count(key))
      throw ConfigError("unknown key '" + (where.empty() ? key : where + "." + key) +
                        "'");
}

double get_number(const json& obj, const std::string& where,
                  const std::string& key, double fallback) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_number())
    throw ConfigError((where.empty() ? key : where + "." + key) +
                      ": expected a number");
  return v.get<double>();
}

std::vector<double> get_number_list(const json& obj, const std::string& key) {
  std::vector<double> out;
  for (const json& v : obj.at(key)) {
    if (!v.is_number()) throw ConfigError(key + ": expected numbers");
    out.push_back(v.get<double>());
  }
  return out;
}

}  // namespace

std::vector<double> resolved_arrival_rates(const RunConfig& c) {
  if (!c.arrival_rates.empty()) return c.arrival_rates;
  return std::vector<double>(static_cast<std::size_t>(c.num_nodes), c.arrival_rate);
}

std::vector<double> resolved_service_rates(const RunConfig& c) {
  if (!c.service_rates.empty()) return c.service_rates;
  return std::vector<double>(static_cast<std::size_t>(c.num_nodes), c.service_rate);
}

std::vector<double> resolved_tx_powers(const RunConfig& c) {
  if (!c.tx_powers_dbm.empty()) return c.tx_powers_dbm;
  return std::vector<double>(static_cast<std::size_t>(c.num_nodes), c.tx_power_dbm);
}

void validate(const RunConfig& c) {
  auto require = [](bool ok, const std::string& field, const std::string& why) {
    if (!ok) throw ConfigError(field + ": " + why);
  };
  require(c.num_nodes >= 2, "nodes", "at least 2 fog nodes required");
  require(c.queue_capacity >= 1, "queue_capacity", "must be >= 1");
  require(c.w_max >= 1, "w_max", "must be >= 1");
  require(c.arrival_rate > 0.0, "arrival_rate", "must be > 0");
  require(c.service_rate > 0.0, "service_rate", "must be > 0");
  require(c.area_width_m > 0.0 && c.area_height_m > 0.0, "area",
          "dimensions must be > 0");

  auto check_vector = [&](const std::vector<double>& v, const std::string& field) {
    if (v.empty()) return;
    require(v.size() == static_cast<std::size_t>(c.num_nodes), field,
            "length must equal nodes (" + std::to_string(c.num_nodes) + ")");
    if (field != "tx_powers_dbm")
      for (double x : v) require(x > 0.0, field, "entries must be > 0");
  };
  check_vector(c.arrival_rates, "arrival_rates");
  check_vector(c.service_rates, "service_rates");
  check_vector(c.tx_powers_dbm, "tx_powers_dbm");

  try {
    fogsim::validate(c.task);
    fogsim::validate(c.channel);
    fogsim::validate(c.weights);
    fogsim::validate(c.learning);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  require(c.learning.max_iterations >= 1, "learning.iterations", "must be >= 1");
  require(c.eval_iterations >= 1, "eval_iterations", "must be >= 1");
  require(!c.seeds.empty(), "seeds", "must not be empty");
  require(c.sweep.variable == "arrival" || c.sweep.variable == "service",
          "sweep.variable", "must be 'arrival' or 'service'");
  require(!c.sweep.values.empty(), "sweep.values", "must not be empty");
  for (double v : c.sweep.values)
    require(v > 0.0, "sweep.values", "entries must be > 0");
  require(!c.policies.empty(), "policies", "must not be empty");
  for (const std::string& p : c.policies)
    require(p == "qlearning" || p == "random" || p == "least-queue" ||
                p == "nearest",
            "policies", "unknown policy '" + p + "'");
}

RunConfig parse_config(const std::string& json_text) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config parse error: ") + e.what());
  }
  if (!root.is_object()) throw ConfigError("config root must be an object");

  reject_unknown_keys(root, "",
                      {"nodes", "queue_capacity", "w_max", "arrival_rate",
                       "arrival_rates", "service_rate", "service_rates",
                       "tx_power_dbm", "tx_powers_dbm", "area_m", "task",
                       "channel", "weights", "learning", "eval_iterations",
                       "seeds", "sweep", "policies", "output_dir", "seed"});

  RunConfig c;
  if (root.contains("nodes")) c.num_nodes = root.at("nodes").get<int>();
  if (root.contains("queue_capacity"))
    c.queue_capacity = root.at("queue_capacity").get<int>();
  if (root.contains("w_max")) c.w_max = root.at("w_max").get<int>();
  c.arrival_rate = get_number(root, "", "arrival_rate", c.arrival_rate);
  if (root.contains("arrival_rates"))
    c.arrival_rates = get_number_list(root, "arrival_rates");
  c.service_rate = get_number(root, "", "service_rate", c.service_rate);
  if (root.contains("service_rates"))
    c.service_rates = get_number_list(root, "service_rates");
  c.tx_power_dbm = get_number(root, "", "tx_power_dbm", c.tx_power_dbm);
  if (root.contains("tx_powers_dbm"))
    c.tx_powers_dbm = get_number_list(root, "tx_powers_dbm");

  if (root.contains("area_m")) {
    const json& area = root.at("area_m");
    if (!area.is_array() || area.size() != 2)
      throw ConfigError("area_m: expected [width, height]");
    c.area_width_m = area[0].get<double>();
    c.area_height_m = area[1].get<double>();
  }

  if (root.contains("task")) {
    const json& t = root.at("task");
    reject_unknown_keys(t, "task", {"data_size_mbytes", "instructions", "cpi"});
    const double mbytes =
        get_number(t, "task", "data_size_mbytes", c.task.data_size_bits / 8.0e6);
    c.task.data_size_bits = mbytes * 8.0e6;  // decimal megabytes to bits
    c.task.instructions = get_number(t, "task", "instructions", c.task.instructions);
    c.task.cpi = get_number(t, "task", "cpi", c.task.cpi);
  }

  if (root.contains("channel")) {
    const json& ch = root.at("channel");
    reject_unknown_keys(ch, "channel",
                        {"bandwidth_hz", "path_loss_const", "path_loss_exp",
                         "noise_psd_dbm_hz"});
    c.channel.bandwidth_hz =
        get_number(ch, "channel", "bandwidth_hz", c.channel.bandwidth_hz);
    c.channel.path_loss_const =
        get_number(ch, "channel", "path_loss_const", c.channel.path_loss_const);
    c.channel.path_loss_exp =
        get_number(ch, "channel", "path_loss_exp", c.channel.path_loss_exp);
    c.channel.noise_psd_dbm_hz =
        get_number(ch, "channel", "noise_psd_dbm_hz", c.channel.noise_psd_dbm_hz);
  }

  if (root.contains("weights")) {
    const json& w = root.at("weights");
    reject_unknown_keys(w, "weights",
                        {"utility_reward", "delay_weight", "overload_weight"});
    c.weights.utility_reward =
        get_number(w, "weights", "utility_reward", c.weights.utility_reward);
    c.weights.delay_weight =
        get_number(w, "weights", "delay_weight", c.weights.delay_weight);
    c.weights.overload_weight =
        get_number(w, "weights", "overload_weight", c.weights.overload_weight);
  }

  if (root.contains("learning")) {
    const json& l = root.at("learning");
    reject_unknown_keys(l, "learning",
                        {"alpha", "gamma", "epsilon_start", "epsilon_end",
                         "iterations", "seed"});
    c.learning.learning_rate =
        get_number(l, "learning", "alpha", c.learning.learning_rate);
    c.learning.discount = get_number(l, "learning", "gamma", c.learning.discount);
    c.learning.epsilon_start =
        get_number(l, "learning", "epsilon_start", c.learning.epsilon_start);
    c.learning.epsilon_end =
        get_number(l, "learning", "epsilon_end", c.learning.epsilon_end);
    if (l.contains("iterations"))
      c.learning.max_iterations = l.at("iterations").get<std::uint64_t>();
    if (l.contains("seed"))
      c.learning.seed = l.at("seed").get<std::uint64_t>();
  }

  if (root.contains("eval_iterations"))
    c.eval_iterations = root.at("eval_iterations").get<std::uint64_t>();
  if (root.contains("seeds")) {
    c.seeds.clear();
    for (const json& v : root.at("seeds"))
      c.seeds.push_back(v.get<std::uint64_t>());
  }
  if (root.contains("sweep")) {
    const json& s = root.at("sweep");
    reject_unknown_keys(s, "sweep", {"variable", "values"});
    if (s.contains("variable")) c.sweep.variable = s.at("variable").get<std::string>();
    if (s.contains("values")) c.sweep.values = get_number_list(s, "values");
  }
  if (root.contains("policies")) {
    c.policies.clear();
    for (const json& v : root.at("policies"))
      c.policies.push_back(v.get<std::string>());
  }
  if (root.contains("output_dir"))
    c.output_dir = root.at("output_dir").get<std::string>();
  if (root.contains("seed")) c.seed = root.at("seed").get<std::uint64_t>();

  validate(c);
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw ConfigError("cannot read config file '" + path + "'");
  std::ostringstream buf;
  buf << is.rdbuf();
  return parse_config(buf.str());
}

std::string write_config(const RunConfig& c) {
  json root;
  root["nodes"] = c.num_nodes;
  root["queue_capacity"] = c.queue_capacity;
  root["w_max"] = c.w_max;
  root["arrival_rate"] = c.arrival_rate;
  if (!c.arrival_rates.empty()) root["arrival_rates"] = c.arrival_rates;
  root["service_rate"] = c.service_rate;
  if (!c.service_rates.empty()) root["service_rates"] = c.service_rates;
  root["tx_power_dbm"] = c.tx_power_dbm;
  if (!c.tx_powers_dbm.empty()) root["tx_powers_dbm"] = c.tx_powers_dbm;
  root["area_m"] = {c.area_width_m, c.area_height_m};
  root["task"] = {{"data_size_mbytes", c.task.data_size_bits / 8.0e6},
                  {"instructions", c.task.instructions},
                  {"cpi", c.task.cpi}};
  root["channel"] = {{"bandwidth_hz", c.channel.bandwidth_hz},
                     {"path_loss_const", c.channel.path_loss_const},
                     {"path_loss_exp", c.channel.path_loss_exp},
                     {"noise_psd_dbm_hz", c.channel.noise_psd_dbm_hz}};
  root["weights"] = {{"utility_reward", c.weights.utility_reward},
                     {"delay_weight", c.weights.delay_weight},
                     {"overload_weight", c.weights.overload_weight}};
  root["learning"] = {{"alpha", c.learning.learning_rate},
                      {"gamma", c.learning.discount},
                      {"epsilon_start", c.learning.epsilon_start},
                      {"epsilon_end", c.learning.epsilon_end},
                      {"iterations", c.learning.max_iterations},
                      {"seed", c.learning.seed}};
  root["eval_iterations"] = c.eval_iterations;
  root["seeds"] = c.seeds;
  root["sweep"] = {{"variable", c.sweep.variable}, {"values", c.sweep.values}};
  root["policies"] = c.policies;
  root["output_dir"] = c.output_dir;
  root["seed"] = c.seed;
  return root.dump(2) + "\n";
}

}  // namespace fogsim
