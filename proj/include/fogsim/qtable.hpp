#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <unordered_map>

#include "fogsim/mdp.hpp"

namespace fogsim {

// Sparse state-action value table.  Keys absent from the table read as 0.
//
// Text export format, one line per entry, sorted canonically:
//   state-key <TAB> action-key <TAB> value <TAB> visits
// state-key  = "n,w,Q1,...,QN"  (requesting node, batch size, queue vector)
// action-key = "t,c"            (target node, offload count; "0,0" = local)
// Values are printed with 17 significant digits so they round-trip exactly.
class QTable {
 public:
  struct Entry {
    double value = 0.0;
    std::uint32_t visits = 0;
  };

  explicit QTable(const FogEnvironment& env);

  double value(const SystemState& s, const OffloadAction& a) const;
  const Entry* find(const SystemState& s, const OffloadAction& a) const;
  Entry& entry(const SystemState& s, const OffloadAction& a);

  std::size_t size() const { return entries_.size(); }

  // Total visit count across all actions of a state.
  std::uint64_t state_visits(const SystemState& s) const;

  void for_each(const std::function<void(const SystemState&, const OffloadAction&,
                                         const Entry&)>& fn) const;

  void save(std::ostream& os) const;
  std::string save_to_string() const;

  // Parses and validates an export; every entry must reference a valid
  // state and an action admissible in it.
  static QTable load(std::istream& is, const FogEnvironment& env);
  static QTable load_file(const std::string& path, const FogEnvironment& env);
  void save_file(const std::string& path) const;

 private:
  std::uint64_t key(const SystemState& s, const OffloadAction& a) const;
  std::uint64_t action_code(const OffloadAction& a) const;
  OffloadAction decode_action(std::uint64_t code) const;

  StateIndexer indexer_;
  std::uint64_t action_radix_ = 0;
  std::unordered_map<std::uint64_t, Entry> entries_;
};

}  // namespace fogsim
