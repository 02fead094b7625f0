#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "dancewalk/cuckoo.hpp"
#include "dancewalk/oriented_forest.hpp"
#include "dancewalk/script.hpp"

// Brute-force checkers that share no code with the structures they check.
namespace dancewalk::oracle {

using Edge = std::pair<VertexId, VertexId>;

struct ViabilityVerdict {
  bool viable = true;
  std::size_t min_stash_needed = 0;
};

// An edge multiset is orientable with out-degree 1 iff every connected
// component has no more edges than vertices (a pseudoforest). Each surplus
// edge must go to the stash.
ViabilityVerdict check_viability(std::span<const Edge> edges, std::size_t n);

struct OrientationLimits {
  std::optional<std::uint32_t> max_out_degree;
  bool allow_bad = true;
};

struct OrientationReport {
  bool ok = true;
  std::vector<std::string> violations;
  std::vector<EdgeId> offending_edges;
};

// Full sweep over slot invariants: owners are endpoints, every alive edge sits
// in exactly one slot of its owner and slot classes match, capacities hold,
// primary and secondary edges form a forest.
OrientationReport check_orientation(const ForestSnapshot& state, const OrientationLimits& limits = {});
OrientationReport check_orientation(const OrientedForest& forest, const OrientationLimits& limits = {});

struct WindowVerdict {
  std::size_t window = 0;
  std::size_t first_op = 0;  // script indices, inclusive
  std::size_t last_op = 0;
  std::size_t placements = 0;
  ViabilityVerdict verdict;
};

struct EpsilonVerdict {
  std::vector<WindowVerdict> windows;
  std::size_t max_stash_needed = 0;
  bool viable_with(std::size_t stash) const { return max_stash_needed <= stash; }
};

// Splits the insert/delete operations into windows of ceil(epsilon * n) and
// checks the placements each window makes: records carried in from the
// previous window plus every insert of an absent key.
EpsilonVerdict check_epsilon_viability(const Script& script, std::size_t n, double epsilon,
                                       const HashPairProvider& provider);

struct EquivalenceVerdict {
  bool equal = true;
  std::optional<std::size_t> divergence_op;
  std::string message;
  std::size_t queries_compared = 0;
};

// Replays `script` against `table` and a plain dictionary, comparing every
// query and the final membership.
EquivalenceVerdict replay_with_oracle(const Script& script, CuckooTable& table);

struct InstrumentedCounters {
  std::uint64_t operations = 0;
  std::uint64_t queries = 0;
  std::uint64_t max_d_writes_per_op = 0;
  std::uint64_t max_rebuild_d_writes_per_op = 0;
  std::uint64_t query_writes = 0;
  std::uint64_t query_reads_outside_bins = 0;
  std::uint32_t max_kickouts = 0;
  std::size_t stash_high_water = 0;
  std::size_t max_bin_occupancy = 0;
  std::size_t max_half_occupancy = 0;
  bool old_parity_clean_at_boundaries = true;
  std::uint64_t boundaries_checked = 0;
};

// Wraps a table and records per-operation maxima for the acceptance gates.
class InstrumentedTable {
 public:
  explicit InstrumentedTable(CuckooTable& table);

  OperationOutcome insert(Key key, Value value);
  OperationOutcome erase(Key key);
  std::optional<Value> query(Key key);

  // Scans bins touched so far for occupancy maxima.
  void sweep_occupancy();

  const InstrumentedCounters& counters() const { return counters_; }
  CuckooTable& table() { return table_; }

 private:
  void note(const OperationOutcome& out);

  CuckooTable& table_;
  InstrumentedCounters counters_;
};

}  // namespace dancewalk::oracle
