#include "fogsim/qtable.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "fogsim/csv.hpp"

namespace fogsim {

QTable::QTable(const FogEnvironment& env)
    : indexer_(env.indexer()),
      action_radix_(static_cast<std::uint64_t>(env.num_nodes() + 1) *
                    static_cast<std::uint64_t>(env.w_max() + 1)) {
  if (indexer_.state_count() >
      std::numeric_limits<std::uint64_t>::max() / action_radix_)
    throw std::overflow_error("qtable: state-action key exceeds 64 bits");
}

std::uint64_t QTable::action_code(const OffloadAction& a) const {
  return static_cast<std::uint64_t>(a.target_node) *
             static_cast<std::uint64_t>(indexer_.w_max() + 1) +
         static_cast<std::uint64_t>(a.offload_count);
}

OffloadAction QTable::decode_action(std::uint64_t code) const {
  const std::uint64_t radix = static_cast<std::uint64_t>(indexer_.w_max() + 1);
  return OffloadAction{static_cast<int>(code / radix),
                       static_cast<int>(code % radix)};
}

std::uint64_t QTable::key(const SystemState& s, const OffloadAction& a) const {
  return indexer_.encode(s) * action_radix_ + action_code(a);
}

double QTable::value(const SystemState& s, const OffloadAction& a) const {
  const auto it = entries_.find(key(s, a));
  return it == entries_.end() ? 0.0 : it->second.value;
}

const QTable::Entry* QTable::find(const SystemState& s,
                                  const OffloadAction& a) const {
  const auto it = entries_.find(key(s, a));
  return it == entries_.end() ? nullptr : &it->second;
}

QTable::Entry& QTable::entry(const SystemState& s, const OffloadAction& a) {
  return entries_[key(s, a)];
}

std::uint64_t QTable::state_visits(const SystemState& s) const {
  const std::uint64_t base = indexer_.encode(s) * action_radix_;
  std::uint64_t total = 0;
  for (std::uint64_t code = 0; code < action_radix_; ++code) {
    const auto it = entries_.find(base + code);
    if (it != entries_.end()) total += it->second.visits;
  }
  return total;
}

void QTable::for_each(
    const std::function<void(const SystemState&, const OffloadAction&,
                             const Entry&)>& fn) const {
  std::vector<std::uint64_t> keys;
  keys.reserve(entries_.size());
  for (const auto& [k, _] : entries_) keys.push_back(k);
  std::sort(keys.begin(), keys.end());
  for (std::uint64_t k : keys) {
    const SystemState s = indexer_.decode(k / action_radix_);
    const OffloadAction a = decode_action(k % action_radix_);
    fn(s, a, entries_.at(k));
  }
}

void QTable::save(std::ostream& os) const {
  for_each([&](const SystemState& s, const OffloadAction& a, const Entry& e) {
    os << s.requesting_node << ',' << s.batch_size;
    for (int q : s.queues) os << ',' << q;
    os << '\t' << a.target_node << ',' << a.offload_count << '\t'
       << format_double(e.value) << '\t' << e.visits << '\n';
  });
}

std::string QTable::save_to_string() const {
  std::ostringstream os;
  save(os);
  return os.str();
}

void QTable::save_file(const std::string& path) const {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("qtable: cannot write " + path);
  save(os);
}

namespace {

std::vector<long long> parse_int_list(const std::string& text,
                                      const std::string& what) {
  std::vector<long long> out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t comma = text.find(',', pos);
    const std::string tok =
        text.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
    if (tok.empty()) throw std::runtime_error("qtable: empty field in " + what);
    std::size_t used = 0;
    const long long v = std::stoll(tok, &used);
    if (used != tok.size())
      throw std::runtime_error("qtable: bad integer '" + tok + "' in " + what);
    out.push_back(v);
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return out;
}

}  // namespace

QTable QTable::load(std::istream& is, const FogEnvironment& env) {
  QTable table(env);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::istringstream fields(line);
    std::string state_key, action_key, value_text, visits_text;
    if (!std::getline(fields, state_key, '\t') ||
        !std::getline(fields, action_key, '\t') ||
        !std::getline(fields, value_text, '\t') ||
        !std::getline(fields, visits_text))
      throw std::runtime_error("qtable: malformed line " + std::to_string(line_no));

    const auto sk = parse_int_list(state_key, "state key");
    if (sk.size() != static_cast<std::size_t>(env.num_nodes()) + 2)
      throw std::runtime_error("qtable: wrong state-key arity at line " +
                               std::to_string(line_no));
    SystemState s;
    s.requesting_node = static_cast<int>(sk[0]);
    s.batch_size = static_cast<int>(sk[1]);
    for (int i = 0; i < env.num_nodes(); ++i)
      s.queues.push_back(static_cast<int>(sk[static_cast<std::size_t>(i) + 2]));
    if (!env.is_valid_state(s))
      throw std::runtime_error("qtable: invalid state at line " +
                               std::to_string(line_no));

    const auto ak = parse_int_list(action_key, "action key");
    if (ak.size() != 2)
      throw std::runtime_error("qtable: wrong action-key arity at line " +
                               std::to_string(line_no));
    const OffloadAction a{static_cast<int>(ak[0]), static_cast<int>(ak[1])};
    if (!env.is_admissible(s, a))
      throw std::runtime_error("qtable: inadmissible action at line " +
                               std::to_string(line_no));

    Entry e;
    e.value = parse_double(value_text);
    const long long visits = std::stoll(visits_text);
    if (visits < 1)
      throw std::runtime_error("qtable: visits must be >= 1 at line " +
                               std::to_string(line_no));
    e.visits = static_cast<std::uint32_t>(visits);
    table.entries_[table.key(s, a)] = e;
  }
  return table;
}

QTable QTable::load_file(const std::string& path, const FogEnvironment& env) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("qtable: cannot read " + path);
  return load(is, env);
}

}  // namespace fogsim
