#include "dancewalk/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <numeric>
#include <unordered_map>

namespace dancewalk::oracle {

namespace {

// Path-halving union-find; deliberately unrelated to RankForest/SizeForest.
class Components {
 public:
  explicit Components(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }

  std::size_t find(std::size_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }
  bool unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    parent_[a] = b;
    return true;
  }

 private:
  std::vector<std::size_t> parent_;
};

std::string describe(EdgeId id, const std::string& what) {
  return "edge " + std::to_string(id) + ": " + what;
}

}  // namespace

ViabilityVerdict check_viability(std::span<const Edge> edges, std::size_t n) {
  Components uf(n);
  for (const auto& [a, b] : edges) uf.unite(a, b);
  std::vector<std::size_t> vertices(n, 0);
  std::vector<std::size_t> edge_count(n, 0);
  for (std::size_t v = 0; v < n; ++v) ++vertices[uf.find(v)];
  for (const auto& [a, b] : edges) ++edge_count[uf.find(a)];
  ViabilityVerdict out;
  for (std::size_t r = 0; r < n; ++r) {
    if (edge_count[r] > vertices[r]) out.min_stash_needed += edge_count[r] - vertices[r];
  }
  out.viable = out.min_stash_needed == 0;
  return out;
}

OrientationReport check_orientation(const ForestSnapshot& s, const OrientationLimits& limits) {
  OrientationReport report;
  auto fail = [&](EdgeId id, std::string what) {
    report.ok = false;
    if (report.violations.size() < 64) report.violations.push_back(std::move(what));
    if (id != kNoEdge) report.offending_edges.push_back(id);
  };

  // slot references per edge id
  std::vector<std::uint32_t> refs(s.edges.size(), 0);
  auto visit = [&](VertexId v, EdgeId id, EdgeClass cls) {
    if (id >= s.edges.size()) {
      fail(id, "vertex " + std::to_string(v) + " references unknown edge " + std::to_string(id));
      return;
    }
    ++refs[id];
    const EdgeRecord& e = s.edges[id];
    if (!e.alive) fail(id, describe(id, "dead edge still referenced by vertex " + std::to_string(v)));
    if (e.owner != v) {
      fail(id, describe(id, "stored at vertex " + std::to_string(v) + " but owned by " +
                                std::to_string(e.owner)));
    }
    if (e.cls != cls) fail(id, describe(id, "slot class mismatch at vertex " + std::to_string(v)));
  };

  for (VertexId v = 0; v < s.n; ++v) {
    const auto& row = s.primary_out[v];
    if (row.size() > s.k) {
      fail(kNoEdge, "vertex " + std::to_string(v) + " has " + std::to_string(row.size()) +
                        " primaries, capacity " + std::to_string(s.k));
    }
    for (EdgeId id : row) visit(v, id, EdgeClass::Primary);
    if (s.secondary_out[v] != kNoEdge) {
      visit(v, s.secondary_out[v], EdgeClass::Secondary);
      if (!s.volunteered[v]) {
        fail(s.secondary_out[v], "vertex " + std::to_string(v) + " holds a secondary edge without volunteering");
      }
    }
    if (s.bad_out[v] != kNoEdge) {
      if (!limits.allow_bad) fail(s.bad_out[v], "bad edge present where none are allowed");
      visit(v, s.bad_out[v], EdgeClass::Bad);
    }
    const std::size_t degree = row.size() + (s.secondary_out[v] != kNoEdge) + (s.bad_out[v] != kNoEdge);
    if (limits.max_out_degree && degree > *limits.max_out_degree) {
      fail(kNoEdge, "vertex " + std::to_string(v) + " has out-degree " + std::to_string(degree));
    }
  }

  Components uf(s.n);
  for (EdgeId id = 0; id < s.edges.size(); ++id) {
    const EdgeRecord& e = s.edges[id];
    if (!e.alive) {
      if (refs[id] != 0) fail(id, describe(id, "dead but referenced"));
      continue;
    }
    if (e.a >= s.n || e.b >= s.n) {
      fail(id, describe(id, "endpoint out of range"));
      continue;
    }
    if (e.owner != e.a && e.owner != e.b) fail(id, describe(id, "owner is not an endpoint"));
    if (refs[id] != 1) {
      fail(id, describe(id, "referenced by " + std::to_string(refs[id]) + " slots"));
    }
    if (e.cls != EdgeClass::Bad && !uf.unite(e.a, e.b)) {
      fail(id, describe(id, "closes a cycle among primary and secondary edges"));
    }
  }
  return report;
}

OrientationReport check_orientation(const OrientedForest& forest, const OrientationLimits& limits) {
  return check_orientation(forest.snapshot(), limits);
}

EpsilonVerdict check_epsilon_viability(const Script& script, std::size_t n, double epsilon,
                                       const HashPairProvider& provider) {
  EpsilonVerdict out;
  const auto window_len = std::max<std::size_t>(
      1, static_cast<std::size_t>(std::ceil(epsilon * static_cast<double>(n) - 1e-9)));

  std::unordered_map<Key, BinPair> present;
  std::vector<Edge> placed;
  WindowVerdict current;
  std::size_t in_window = 0;
  bool open = false;

  auto open_window = [&](std::size_t op_index) {
    current = WindowVerdict{};
    current.window = out.windows.size();
    current.first_op = op_index;
    placed.clear();
    for (const auto& [key, pair] : present) placed.emplace_back(pair.first, pair.second);
    in_window = 0;
    open = true;
  };
  auto close_window = [&](std::size_t last_op) {
    current.last_op = last_op;
    current.placements = placed.size();
    current.verdict = check_viability(placed, n);
    out.max_stash_needed = std::max(out.max_stash_needed, current.verdict.min_stash_needed);
    out.windows.push_back(current);
    open = false;
  };

  std::size_t last_mutation = 0;
  for (std::size_t i = 0; i < script.size(); ++i) {
    const ScriptOp& op = script[i];
    if (op.kind == OpKind::Query) continue;
    if (!open) open_window(i);
    if (op.kind == OpKind::Insert) {
      if (!present.contains(op.key)) {
        const BinPair pair = provider.bins(op.key);
        present.emplace(op.key, pair);
        placed.emplace_back(pair.first, pair.second);
      }
    } else {
      present.erase(op.key);
    }
    last_mutation = i;
    if (++in_window == window_len) close_window(i);
  }
  if (open) close_window(last_mutation);
  return out;
}

EquivalenceVerdict replay_with_oracle(const Script& script, CuckooTable& table) {
  EquivalenceVerdict out;
  std::unordered_map<Key, Value> reference;
  auto diverge = [&](std::size_t i, std::string what) {
    out.equal = false;
    out.divergence_op = i;
    out.message = "op " + std::to_string(i) + ": " + what;
  };

  for (std::size_t i = 0; i < script.size(); ++i) {
    const ScriptOp& op = script[i];
    try {
      switch (op.kind) {
        case OpKind::Insert:
          table.insert(op.key, op.value);
          reference[op.key] = op.value;
          break;
        case OpKind::Delete:
          table.erase(op.key);
          reference.erase(op.key);
          break;
        case OpKind::Query: {
          ++out.queries_compared;
          const auto got = table.query(op.key);
          const auto it = reference.find(op.key);
          const bool want_present = it != reference.end();
          if (got.has_value() != want_present || (got && *got != it->second)) {
            diverge(i, "query for key " + std::to_string(op.key) + " disagrees with reference");
            return out;
          }
          break;
        }
      }
    } catch (const std::exception& e) {
      diverge(i, std::string("table raised: ") + e.what());
      return out;
    }
  }

  if (table.size() != reference.size()) {
    diverge(script.size(), "table holds " + std::to_string(table.size()) + " records, reference " +
                               std::to_string(reference.size()));
    return out;
  }
  for (const auto& [key, value] : reference) {
    const auto got = table.query(key);
    if (!got || *got != value) {
      diverge(script.size(), "final membership differs at key " + std::to_string(key));
      return out;
    }
  }
  return out;
}

InstrumentedTable::InstrumentedTable(CuckooTable& table) : table_(table) {
  table_.set_phase_observer([this](const CuckooTable& t) {
    ++counters_.boundaries_checked;
    if (t.old_parity_records() != 0) counters_.old_parity_clean_at_boundaries = false;
  });
}

void InstrumentedTable::note(const OperationOutcome& out) {
  ++counters_.operations;
  counters_.max_d_writes_per_op = std::max(counters_.max_d_writes_per_op, out.d_writes);
  counters_.max_rebuild_d_writes_per_op =
      std::max(counters_.max_rebuild_d_writes_per_op, out.rebuild_d_writes);
  counters_.max_kickouts = std::max(counters_.max_kickouts, out.kickouts);
  counters_.stash_high_water = std::max(counters_.stash_high_water, table_.stash().size());
}

OperationOutcome InstrumentedTable::insert(Key key, Value value) {
  const OperationOutcome out = table_.insert(key, value);
  note(out);
  return out;
}

OperationOutcome InstrumentedTable::erase(Key key) {
  const OperationOutcome out = table_.erase(key);
  note(out);
  return out;
}

std::optional<Value> InstrumentedTable::query(Key key) {
  ++counters_.queries;
  const std::uint64_t writes_before = table_.d_write_counter();
  const std::uint64_t ops_before = table_.stats().operations;
  const std::size_t stash_size = table_.stash().size();
  QueryProbe probe;
  const auto got = table_.query(key, probe);
  if (table_.d_write_counter() != writes_before || table_.stats().operations != ops_before) {
    ++counters_.query_writes;
  }
  const BinPair pair = table_.provider().bins(key);
  const std::uint32_t allowed_bins = pair.first == pair.second ? 1 : 2;
  if (probe.bins_read > allowed_bins || probe.slots_read > probe.bins_read * kSlotsPerBin ||
      probe.stash_entries_read > stash_size) {
    ++counters_.query_reads_outside_bins;
  }
  return got;
}

void InstrumentedTable::sweep_occupancy() {
  for (std::size_t b = 0; b < table_.bin_count(); ++b) {
    std::size_t halves[2] = {0, 0};
    for (std::size_t pos = 0; pos < kSlotsPerBin; ++pos) {
      if (table_.slot(b, pos).occupied) ++halves[pos / kSlotsPerHalf];
    }
    counters_.max_bin_occupancy = std::max(counters_.max_bin_occupancy, halves[0] + halves[1]);
    counters_.max_half_occupancy =
        std::max({counters_.max_half_occupancy, halves[0], halves[1]});
  }
}

}  // namespace dancewalk::oracle
