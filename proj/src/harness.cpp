#include "fogsim/harness.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <istream>
#include <map>
#include <ostream>
#include <stdexcept>

#include "fogsim/csv.hpp"
#include "fogsim/qlearning.hpp"

namespace fogsim {

MetricsReport run_episode(const FogEnvironment& env, const Policy& policy,
                          std::uint64_t iterations, std::uint64_t seed) {
  MetricsReport report;
  report.policy = policy.name();
  report.seed = seed;
  report.iterations = iterations;
  if (iterations == 0) return report;

  RngStream rng(derive_seed(seed, "episode"));
  std::vector<OffloadAction> scratch;
  SystemState state = env.initial_state();

  double reward_sum = 0.0;
  double delay_sum = 0.0;
  std::uint64_t delay_samples = 0;

  for (std::uint64_t it = 0; it < iterations; ++it) {
    const OffloadAction action = policy.select(env, state, rng, scratch);
    const StepOutcome outcome = env.step(state, action, rng);

    reward_sum += outcome.reward.total;
    const int placed = outcome.placed_local + outcome.placed_remote;
    if (placed > 0) {
      delay_sum += (outcome.reward.t_wait + outcome.reward.t_comm +
                    outcome.reward.t_exec) /
                   static_cast<double>(placed);
      ++delay_samples;
    }
    report.offered += static_cast<std::uint64_t>(state.batch_size);
    report.placed_local += static_cast<std::uint64_t>(outcome.placed_local);
    report.placed_remote += static_cast<std::uint64_t>(outcome.placed_remote);
    report.dropped += static_cast<std::uint64_t>(outcome.dropped);
    state = outcome.next;
  }

  report.avg_reward = reward_sum / static_cast<double>(iterations);
  report.avg_delay =
      delay_samples == 0 ? 0.0 : delay_sum / static_cast<double>(delay_samples);
  report.avg_overload =
      report.offered == 0
          ? 0.0
          : static_cast<double>(report.dropped) / static_cast<double>(report.offered);
  return report;
}

namespace {

RunConfig config_for_value(const RunConfig& base, const std::string& variable,
                           double value) {
  RunConfig c = base;
  if (variable == "arrival") {
    c.arrival_rate = value;
    c.arrival_rates.clear();
  } else if (variable == "service") {
    c.service_rate = value;
    c.service_rates.clear();
  } else {
    throw std::invalid_argument("sweep: unknown variable '" + variable + "'");
  }
  return c;
}

// One (value, seed) cell: shared topology and a shared evaluation stream
// across policies, private training stream for Q-learning.
std::vector<MetricsReport> run_cell(const SweepRequest& request,
                                    std::size_t value_index, double value,
                                    std::uint64_t seed) {
  const RunConfig cfg =
      config_for_value(request.config, request.config.sweep.variable, value);
  const Scenario scenario =
      make_scenario(cfg, derive_seed(seed, "placement", value_index));
  const FogEnvironment env = make_environment(scenario);

  std::optional<QTable> table;
  std::vector<MetricsReport> reports;
  for (const std::string& name : cfg.policies) {
    Policy policy = Policy::from_name(name);
    if (policy.needs_table()) {
      LearningConfig learn = cfg.learning;
      if (request.train_iterations > 0)
        learn.max_iterations = request.train_iterations;
      learn.seed = derive_seed(seed, "train", value_index);
      TrainOptions options;
      options.record_trace = false;
      table = train(env, learn, options).table;
      policy.attach_table(&*table);
    }
    MetricsReport report = run_episode(env, policy, cfg.eval_iterations,
                                       derive_seed(seed, "eval", value_index));
    report.sweep_variable = cfg.sweep.variable;
    report.sweep_value = value;
    report.seed = seed;
    reports.push_back(std::move(report));
  }
  return reports;
}

}  // namespace

std::vector<MetricsReport> sweep(const SweepRequest& request) {
  validate(request.config);
  const auto& values = request.config.sweep.values;
  const auto& seeds = request.config.seeds;

  struct Cell {
    std::size_t value_index;
    double value;
    std::uint64_t seed;
  };
  std::vector<Cell> cells;
  for (std::size_t vi = 0; vi < values.size(); ++vi)
    for (std::uint64_t seed : seeds) cells.push_back({vi, values[vi], seed});

  std::vector<std::vector<MetricsReport>> results(cells.size());
  const int jobs = std::max(1, request.jobs);
  if (jobs == 1) {
    for (std::size_t i = 0; i < cells.size(); ++i)
      results[i] =
          run_cell(request, cells[i].value_index, cells[i].value, cells[i].seed);
  } else {
    std::size_t next = 0;
    while (next < cells.size()) {
      const std::size_t batch =
          std::min(static_cast<std::size_t>(jobs), cells.size() - next);
      std::vector<std::future<std::vector<MetricsReport>>> futures;
      for (std::size_t k = 0; k < batch; ++k) {
        const Cell& cell = cells[next + k];
        futures.push_back(std::async(std::launch::async, [&request, cell] {
          return run_cell(request, cell.value_index, cell.value, cell.seed);
        }));
      }
      for (std::size_t k = 0; k < batch; ++k)
        results[next + k] = futures[k].get();
      next += batch;
    }
  }

  // Flatten ordered by (value, policy, seed) regardless of execution order.
  std::vector<MetricsReport> flat;
  for (std::size_t vi = 0; vi < values.size(); ++vi)
    for (const std::string& policy : request.config.policies)
      for (std::size_t si = 0; si < seeds.size(); ++si) {
        const std::size_t cell = vi * seeds.size() + si;
        for (const MetricsReport& r : results[cell])
          if (r.policy == policy) flat.push_back(r);
      }
  return flat;
}

double median(std::vector<double> values) {
  if (values.empty())
    throw std::invalid_argument("median: empty input");
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  return n % 2 == 1 ? values[n / 2]
                    : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

double median_metric(const std::vector<MetricsReport>& reports,
                     const std::string& policy, double value,
                     double (*metric)(const MetricsReport&)) {
  std::vector<double> samples;
  for (const MetricsReport& r : reports)
    if (r.policy == policy && r.sweep_value == value) samples.push_back(metric(r));
  return median(std::move(samples));
}

std::vector<ComparisonRow> compare_policies(
    const std::vector<MetricsReport>& reports) {
  if (reports.empty())
    throw std::invalid_argument("compare_policies: no reports");

  const std::string variable = reports.front().sweep_variable;
  for (const MetricsReport& r : reports)
    if (r.sweep_variable != variable)
      throw std::invalid_argument("compare_policies: mismatched sweep variables");

  // Collect coordinates and check every policy covers every one of them.
  std::map<double, std::map<std::string, std::vector<const MetricsReport*>>> grid;
  std::vector<std::string> policies;
  for (const MetricsReport& r : reports) {
    grid[r.sweep_value][r.policy].push_back(&r);
    if (std::find(policies.begin(), policies.end(), r.policy) == policies.end())
      policies.push_back(r.policy);
  }
  for (const auto& [value, by_policy] : grid)
    for (const std::string& p : policies)
      if (!by_policy.count(p))
        throw std::invalid_argument(
            "compare_policies: policy '" + p + "' missing at sweep value " +
            format_double(value));
  if (std::find(policies.begin(), policies.end(), "qlearning") == policies.end())
    throw std::invalid_argument("compare_policies: no qlearning reports");

  auto median_of = [](const std::vector<const MetricsReport*>& rs,
                      double (*metric)(const MetricsReport&)) {
    std::vector<double> samples;
    for (const MetricsReport* r : rs) samples.push_back(metric(*r));
    return median(std::move(samples));
  };
  static const auto reward_of = [](const MetricsReport& r) { return r.avg_reward; };
  static const auto delay_of = [](const MetricsReport& r) { return r.avg_delay; };
  static const auto overload_of = [](const MetricsReport& r) {
    return r.avg_overload;
  };

  std::vector<ComparisonRow> rows;
  for (const auto& [value, by_policy] : grid) {
    const double q_reward = median_of(by_policy.at("qlearning"), reward_of);
    const double q_delay = median_of(by_policy.at("qlearning"), delay_of);
    const double q_overload = median_of(by_policy.at("qlearning"), overload_of);
    for (const std::string& p : policies) {
      if (p == "qlearning") continue;
      ComparisonRow row;
      row.sweep_variable = variable;
      row.sweep_value = value;
      row.baseline = p;
      row.delta_reward = q_reward - median_of(by_policy.at(p), reward_of);
      row.delta_delay = q_delay - median_of(by_policy.at(p), delay_of);
      row.delta_overload = q_overload - median_of(by_policy.at(p), overload_of);
      row.delta_overload_pp = row.delta_overload * 100.0;
      rows.push_back(row);
    }
  }
  return rows;
}

void write_metrics_csv(std::ostream& os,
                       const std::vector<MetricsReport>& reports) {
  os << "sweep_variable,sweep_value,policy,seed,avg_reward,avg_delay,"
        "avg_overload,drop_count,iterations\n";
  for (const MetricsReport& r : reports) {
    os << r.sweep_variable << ',' << format_double(r.sweep_value) << ','
       << r.policy << ',' << r.seed << ',' << format_double(r.avg_reward) << ','
       << format_double(r.avg_delay) << ',' << format_double(r.avg_overload)
       << ',' << r.dropped << ',' << r.iterations << '\n';
  }
}

std::vector<MetricsReport> read_metrics_csv(std::istream& is) {
  std::vector<MetricsReport> reports;
  std::string line;
  if (!std::getline(is, line))
    throw std::runtime_error("metrics csv: missing header");
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    const auto fields = split_csv(line);
    if (fields.size() != 9)
      throw std::runtime_error("metrics csv: expected 9 fields, got " +
                               std::to_string(fields.size()));
    MetricsReport r;
    r.sweep_variable = fields[0];
    r.sweep_value = parse_double(fields[1]);
    r.policy = fields[2];
    r.seed = std::stoull(fields[3]);
    r.avg_reward = parse_double(fields[4]);
    r.avg_delay = parse_double(fields[5]);
    r.avg_overload = parse_double(fields[6]);
    r.dropped = std::stoull(fields[7]);
    r.iterations = std::stoull(fields[8]);
    reports.push_back(std::move(r));
  }
  return reports;
}

void write_comparison_csv(std::ostream& os,
                          const std::vector<ComparisonRow>& rows) {
  os << "sweep_variable,sweep_value,baseline,delta_reward,delta_delay,"
        "delta_overload,delta_overload_pp\n";
  for (const ComparisonRow& row : rows) {
    os << row.sweep_variable << ',' << format_double(row.sweep_value) << ','
       << row.baseline << ',' << format_double(row.delta_reward) << ','
       << format_double(row.delta_delay) << ','
       << format_double(row.delta_overload) << ','
       << format_double(row.delta_overload_pp) << '\n';
  }
}

}  // namespace fogsim
