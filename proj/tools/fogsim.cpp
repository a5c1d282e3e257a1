// fogsim: batch driver for the fog load-balancing simulator.
//
// Subcommands: train (learn and export a Q-table), evaluate (run policies
// on a fixed scenario), sweep (rate-sweep experiments with retraining per
// point), oracle (value iteration on a tiny instance plus agreement with a
// trained policy).

#include <algorithm>
#include <atomic>
#include <csignal>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "fogsim/csv.hpp"
#include "fogsim/harness.hpp"
#include "fogsim/qlearning.hpp"
#include "fogsim/value_iteration.hpp"

namespace {

std::atomic<bool> g_stop{false};

void handle_sigint(int) { g_stop.store(true); }

// "1..9" (inclusive integer range) or a comma list ("1,2.5,7").
std::vector<double> parse_value_list(const std::string& text) {
  const std::size_t dots = text.find("..");
  if (dots != std::string::npos) {
    const long lo = std::stol(text.substr(0, dots));
    const long hi = std::stol(text.substr(dots + 2));
    if (hi < lo) throw fogsim::ConfigError("range '" + text + "' is empty");
    std::vector<double> out;
    for (long v = lo; v <= hi; ++v) out.push_back(static_cast<double>(v));
    return out;
  }
  std::vector<double> out;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) out.push_back(fogsim::parse_double(tok));
  return out;
}

std::vector<std::uint64_t> parse_seed_list(const std::string& text) {
  std::vector<std::uint64_t> out;
  for (double v : parse_value_list(text))
    out.push_back(static_cast<std::uint64_t>(v));
  return out;
}

std::vector<std::string> parse_policy_list(const std::string& text) {
  if (text == "all") return {"qlearning", "random", "least-queue", "nearest"};
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) out.push_back(tok);
  return out;
}

// Flag-override plumbing shared by all subcommands; flags win over the
// config file, which wins over defaults.
struct CommonOptions {
  std::string config_path;
  std::string output_dir;
  std::string seeds_text;
  std::string policies_text;
  std::uint64_t root_seed = 0;
  bool root_seed_set = false;
  int nodes = 0;
  int qmax = 0;
  int wmax = 0;
  double arrival = 0.0;
  double service = 0.0;
  double alpha = -1.0;
  double gamma = -1.0;
  double eps_start = -1.0;
  double eps_end = -1.0;
  std::uint64_t iterations = 0;
  std::uint64_t eval_iterations = 0;

  void add_flags(CLI::App& cmd) {
    cmd.add_option("--config", config_path, "JSON configuration file");
    cmd.add_option("--out", output_dir,
                   "output directory (overrides FOGSIM_OUTPUT_DIR and config)");
    cmd.add_option("--seed", root_seed, "root seed for all derived streams")
        ->each([this](const std::string&) { root_seed_set = true; });
    cmd.add_option("--nodes", nodes, "number of fog nodes");
    cmd.add_option("--qmax", qmax, "queue capacity per node");
    cmd.add_option("--wmax", wmax, "maximum batch size");
    cmd.add_option("--arrival", arrival, "homogeneous task arrival rate");
    cmd.add_option("--service", service, "homogeneous computing service rate");
    cmd.add_option("--alpha", alpha, "learning rate");
    cmd.add_option("--gamma", gamma, "discount factor");
    cmd.add_option("--eps-start", eps_start, "initial exploration probability");
    cmd.add_option("--eps-end", eps_end, "final exploration probability");
    cmd.add_option("--iterations", iterations, "training iterations");
    cmd.add_option("--eval-iterations", eval_iterations, "evaluation iterations");
    cmd.add_option("--seeds", seeds_text, "seed list, e.g. 1..10 or 3,5,9");
    cmd.add_option("--policies", policies_text,
                   "comma list of policies, or 'all'");
  }

  fogsim::RunConfig resolve() const {
    fogsim::RunConfig c;
    if (!config_path.empty()) c = fogsim::load_config(config_path);
    if (const char* env = std::getenv("FOGSIM_OUTPUT_DIR"))
      if (*env != '\0') c.output_dir = env;
    if (!output_dir.empty()) c.output_dir = output_dir;
    if (root_seed_set) c.seed = root_seed;
    if (nodes > 0) c.num_nodes = nodes;
    if (qmax > 0) c.queue_capacity = qmax;
    if (wmax > 0) c.w_max = wmax;
    if (arrival > 0.0) {
      c.arrival_rate = arrival;
      c.arrival_rates.clear();
    }
    if (service > 0.0) {
      c.service_rate = service;
      c.service_rates.clear();
    }
    if (alpha >= 0.0) c.learning.learning_rate = alpha;
    if (gamma >= 0.0) c.learning.discount = gamma;
    if (eps_start >= 0.0) c.learning.epsilon_start = eps_start;
    if (eps_end >= 0.0) c.learning.epsilon_end = eps_end;
    if (iterations > 0) c.learning.max_iterations = iterations;
    if (eval_iterations > 0) c.eval_iterations = eval_iterations;
    if (!seeds_text.empty()) c.seeds = parse_seed_list(seeds_text);
    if (!policies_text.empty()) c.policies = parse_policy_list(policies_text);
    fogsim::validate(c);
    return c;
  }
};

std::filesystem::path ensure_output_dir(const fogsim::RunConfig& config) {
  const std::filesystem::path dir(config.output_dir);
  std::filesystem::create_directories(dir);
  return dir;
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot write " + path.string());
  os << text;
}

nlohmann::json report_to_json(const fogsim::MetricsReport& r) {
  return {{"policy", r.policy},
          {"sweep_variable", r.sweep_variable},
          {"sweep_value", r.sweep_value},
          {"seed", r.seed},
          {"iterations", r.iterations},
          {"avg_reward", r.avg_reward},
          {"avg_delay", r.avg_delay},
          {"avg_overload", r.avg_overload},
          {"offered", r.offered},
          {"placed_local", r.placed_local},
          {"placed_remote", r.placed_remote},
          {"dropped", r.dropped}};
}

nlohmann::json comparison_to_json(const std::vector<fogsim::ComparisonRow>& rows) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& row : rows)
    arr.push_back({{"sweep_variable", row.sweep_variable},
                   {"sweep_value", row.sweep_value},
                   {"baseline", row.baseline},
                   {"delta_reward", row.delta_reward},
                   {"delta_delay", row.delta_delay},
                   {"delta_overload", row.delta_overload},
                   {"delta_overload_pp", row.delta_overload_pp}});
  return arr;
}

std::string trace_to_csv(const std::vector<fogsim::TraceRow>& trace) {
  std::ostringstream os;
  os << "iteration,reward,delay,overload,dropped\n";
  for (const auto& row : trace)
    os << row.iteration << ',' << fogsim::format_double(row.reward) << ','
       << fogsim::format_double(row.delay) << ','
       << fogsim::format_double(row.overload) << ',' << row.dropped << '\n';
  return os.str();
}

int cmd_train(const CommonOptions& common, const std::string& init_qtable,
              bool record_trace) {
  const fogsim::RunConfig config = common.resolve();
  const auto dir = ensure_output_dir(config);

  const fogsim::Scenario scenario =
      fogsim::make_scenario(config, fogsim::derive_seed(config.seed, "placement"));
  const fogsim::FogEnvironment env = fogsim::make_environment(scenario);

  fogsim::LearningConfig learn = config.learning;
  learn.seed = fogsim::derive_seed(config.seed, "train");

  std::optional<fogsim::QTable> warm;
  fogsim::TrainOptions options;
  options.record_trace = record_trace;
  options.stop = &g_stop;
  if (!init_qtable.empty()) {
    warm = fogsim::QTable::load_file(init_qtable, env);
    options.warm_start = &*warm;
  }

  std::signal(SIGINT, handle_sigint);
  const fogsim::TrainResult result = fogsim::train(env, learn, options);
  std::signal(SIGINT, SIG_DFL);

  result.table.save_file((dir / "qtable.tsv").string());
  if (record_trace)
    write_text_file(dir / "train_trace.csv", trace_to_csv(result.trace));
  write_text_file(dir / "config.json", fogsim::write_config(config));

  const bool interrupted = g_stop.load();
  std::cout << (interrupted ? "interrupted; partial table written: "
                            : "trained table written: ")
            << (dir / "qtable.tsv").string() << " (" << result.table.size()
            << " entries)\n";
  return interrupted ? 130 : 0;
}

int cmd_evaluate(const CommonOptions& common, const std::string& qtable_path) {
  const fogsim::RunConfig config = common.resolve();
  const auto dir = ensure_output_dir(config);

  const fogsim::Scenario scenario =
      fogsim::make_scenario(config, fogsim::derive_seed(config.seed, "placement"));
  const fogsim::FogEnvironment env = fogsim::make_environment(scenario);

  std::optional<fogsim::QTable> table;
  std::vector<fogsim::MetricsReport> reports;
  for (const std::string& name : config.policies) {
    fogsim::Policy policy = fogsim::Policy::from_name(name);
    if (policy.needs_table()) {
      if (qtable_path.empty()) {
        // No table supplied: train one in place with the configured budget.
        fogsim::LearningConfig learn = config.learning;
        learn.seed = fogsim::derive_seed(config.seed, "train");
        fogsim::TrainOptions options;
        options.record_trace = false;
        table = fogsim::train(env, learn, options).table;
      } else {
        table = fogsim::QTable::load_file(qtable_path, env);
      }
      policy.attach_table(&*table);
    }
    for (std::uint64_t seed : config.seeds) {
      fogsim::MetricsReport r = fogsim::run_episode(
          env, policy, config.eval_iterations, fogsim::derive_seed(seed, "eval"));
      r.seed = seed;
      reports.push_back(std::move(r));
    }
  }

  std::ostringstream csv;
  fogsim::write_metrics_csv(csv, reports);
  write_text_file(dir / "metrics.csv", csv.str());

  nlohmann::json summary;
  summary["reports"] = nlohmann::json::array();
  for (const auto& r : reports) summary["reports"].push_back(report_to_json(r));
  write_text_file(dir / "summary.json", summary.dump(2) + "\n");

  std::cout << "policy        avg_reward    avg_delay     avg_overload\n";
  for (const std::string& name : config.policies) {
    std::vector<double> rewards, delays, overloads;
    for (const auto& r : reports)
      if (r.policy == name) {
        rewards.push_back(r.avg_reward);
        delays.push_back(r.avg_delay);
        overloads.push_back(r.avg_overload);
      }
    std::cout << name;
    for (std::size_t pad = name.size(); pad < 14; ++pad) std::cout << ' ';
    std::cout << fogsim::median(rewards) << "  " << fogsim::median(delays)
              << "  " << fogsim::median(overloads) << '\n';
  }
  std::cout << "wrote " << (dir / "metrics.csv").string() << '\n';
  return 0;
}

int cmd_sweep(const CommonOptions& common, const std::string& variable,
              const std::string& values_text, std::uint64_t train_iterations,
              int jobs) {
  fogsim::RunConfig config = common.resolve();
  if (!variable.empty()) config.sweep.variable = variable;
  if (!values_text.empty()) config.sweep.values = parse_value_list(values_text);
  fogsim::validate(config);
  const auto dir = ensure_output_dir(config);

  fogsim::SweepRequest request;
  request.config = config;
  request.train_iterations = train_iterations;
  request.jobs = jobs;

  const std::vector<fogsim::MetricsReport> reports = fogsim::sweep(request);

  std::ostringstream csv;
  fogsim::write_metrics_csv(csv, reports);
  write_text_file(dir / "sweep_metrics.csv", csv.str());

  nlohmann::json summary;
  summary["sweep_variable"] = config.sweep.variable;
  summary["reports"] = nlohmann::json::array();
  for (const auto& r : reports) summary["reports"].push_back(report_to_json(r));

  const bool has_qlearning =
      std::find(config.policies.begin(), config.policies.end(), "qlearning") !=
      config.policies.end();
  if (has_qlearning && config.policies.size() > 1) {
    const auto comparison = fogsim::compare_policies(reports);
    std::ostringstream comparison_csv;
    fogsim::write_comparison_csv(comparison_csv, comparison);
    write_text_file(dir / "comparison.csv", comparison_csv.str());
    summary["comparison"] = comparison_to_json(comparison);
  }
  write_text_file(dir / "summary.json", summary.dump(2) + "\n");

  std::cout << "sweep complete: " << reports.size() << " reports -> "
            << (dir / "sweep_metrics.csv").string() << '\n';
  return 0;
}

int cmd_oracle(const CommonOptions& common, double tolerance,
               std::uint64_t min_visits) {
  fogsim::RunConfig config = common.resolve();

  const fogsim::Scenario scenario =
      fogsim::make_scenario(config, fogsim::derive_seed(config.seed, "placement"));
  const fogsim::FogEnvironment env = fogsim::make_environment(scenario);

  const fogsim::FogDiscreteMdp mdp(env);
  const fogsim::ValueIterationResult vi =
      fogsim::value_iteration(mdp, config.learning.discount, tolerance);
  std::cout << "states: " << mdp.state_count() << '\n';
  std::cout << "value-iteration sweeps: " << vi.sweeps << '\n';
  std::cout << "max bellman residual: " << fogsim::format_double(vi.bellman_residual)
            << '\n';

  std::vector<double> agreements;
  for (std::uint64_t seed : config.seeds) {
    fogsim::LearningConfig learn = config.learning;
    learn.seed = fogsim::derive_seed(seed, "train");
    fogsim::TrainOptions options;
    options.record_trace = false;
    const fogsim::QTable table = fogsim::train(env, learn, options).table;

    std::uint64_t considered = 0, agreed = 0;
    std::vector<fogsim::OffloadAction> scratch;
    for (std::size_t s = 0; s < mdp.state_count(); ++s) {
      const fogsim::SystemState state = mdp.state_at(s);
      if (table.state_visits(state) < min_visits) continue;
      ++considered;
      if (fogsim::greedy_action(env, table, state, scratch) ==
          mdp.policy_action(vi, state))
        ++agreed;
    }
    const double pct = considered == 0
                           ? 100.0
                           : 100.0 * static_cast<double>(agreed) /
                                 static_cast<double>(considered);
    agreements.push_back(pct);
    std::cout << "seed " << seed << ": policy agreement " << pct << "% ("
              << agreed << '/' << considered << " states visited >= "
              << min_visits << " times)\n";
  }
  std::cout << "median policy agreement: " << fogsim::median(agreements)
            << "%\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"fog-network load-balancing simulator"};
  app.require_subcommand(1);

  CommonOptions train_common, eval_common, sweep_common, oracle_common;

  auto* train_cmd = app.add_subcommand("train", "train a Q-table and export it");
  train_common.add_flags(*train_cmd);
  std::string init_qtable;
  bool no_trace = false;
  train_cmd->add_option("--init-qtable", init_qtable,
                        "warm-start from an exported table");
  train_cmd->add_flag("--no-trace", no_trace, "skip writing the training trace");

  auto* eval_cmd =
      app.add_subcommand("evaluate", "evaluate policies on a fixed scenario");
  eval_common.add_flags(*eval_cmd);
  std::string qtable_path;
  eval_cmd->add_option("--qtable", qtable_path,
                       "exported Q-table for the qlearning policy "
                       "(trained in place when omitted)");

  auto* sweep_cmd = app.add_subcommand("sweep", "rate-sweep experiments");
  sweep_common.add_flags(*sweep_cmd);
  std::string variable, values_text;
  std::uint64_t train_iterations = 0;
  int jobs = 1;
  sweep_cmd->add_option("--variable", variable, "arrival or service");
  sweep_cmd->add_option("--values", values_text, "sweep values, e.g. 1..9");
  sweep_cmd->add_option("--train-iterations", train_iterations,
                        "Q-learning budget per sweep cell");
  sweep_cmd->add_option("--jobs", jobs, "parallel sweep cells");

  auto* oracle_cmd = app.add_subcommand(
      "oracle", "value iteration on a tiny instance + policy agreement");
  oracle_common.add_flags(*oracle_cmd);
  double tolerance = 1e-8;
  std::uint64_t min_visits = 1000;
  oracle_cmd->add_option("--tolerance", tolerance, "value-iteration tolerance");
  oracle_cmd->add_option("--min-visits", min_visits,
                         "visit threshold for the agreement statistic");
  // Oracle defaults target the enumerable instance.
  oracle_cmd->parse_complete_callback([&oracle_common] {
    if (oracle_common.nodes == 0) oracle_common.nodes = 2;
    if (oracle_common.qmax == 0) oracle_common.qmax = 2;
    if (oracle_common.wmax == 0) oracle_common.wmax = 2;
    if (oracle_common.seeds_text.empty()) oracle_common.seeds_text = "1..5";
    if (oracle_common.iterations == 0) oracle_common.iterations = 1000000;
    if (oracle_common.policies_text.empty())
      oracle_common.policies_text = "qlearning";
  });

  CLI11_PARSE(app, argc, argv);

  try {
    if (train_cmd->parsed()) return cmd_train(train_common, init_qtable, !no_trace);
    if (eval_cmd->parsed()) return cmd_evaluate(eval_common, qtable_path);
    if (sweep_cmd->parsed())
      return cmd_sweep(sweep_common, variable, values_text, train_iterations, jobs);
    if (oracle_cmd->parsed())
      return cmd_oracle(oracle_common, tolerance, min_visits);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
