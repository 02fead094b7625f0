#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "dancewalk/common.hpp"

namespace dancewalk {

enum class EdgeClass : std::uint8_t { Primary, Secondary, Bad };

struct EdgeRecord {
  VertexId a = kNoVertex;
  VertexId b = kNoVertex;
  VertexId owner = kNoVertex;
  EdgeClass cls = EdgeClass::Primary;
  bool alive = false;

  VertexId other(VertexId v) const { return v == a ? b : a; }
};

struct WalkOutcome {
  enum class Reason : std::uint8_t { LowDegree, FullLength };

  std::vector<EdgeId> path;
  VertexId terminal = kNoVertex;
  Reason reason = Reason::LowDegree;
};

// Plain copy of the forest's slot state. Used by the invariant checker, and
// by tests that need to hand-corrupt a state.
struct ForestSnapshot {
  std::size_t n = 0;
  std::uint32_t k = 0;
  std::vector<std::vector<EdgeId>> primary_out;
  std::vector<EdgeId> secondary_out;
  std::vector<EdgeId> bad_out;
  std::vector<bool> volunteered;
  std::vector<EdgeRecord> edges;  // indexed by EdgeId; dead entries have alive = false
};

// Oriented-forest state: per-vertex out-edge slots and the edge store.
//
// Each vertex owns up to k primary out-edges (kept in insertion order, the
// order the random walk indexes into), one secondary out-edge granted when it
// volunteers, and one bad out-edge used by the hash table for cycle-closing
// edges. Only primary edges are ever walked or flipped. This class makes no
// policy decisions; see algorithms.hpp.
class OrientedForest {
 public:
  OrientedForest(std::size_t n, std::uint32_t k = 2);

  std::size_t vertex_count() const { return n_; }
  std::uint32_t capacity() const { return k_; }

  // Stores the edge {u, v} oriented out of `owner` in the given slot class.
  // Self-loops are accepted only as Bad edges.
  EdgeId install_edge(VertexId u, VertexId v, VertexId owner, EdgeClass cls);

  // Moves every edge of `path` to its other endpoint. `path` must be a
  // directed chain of alive primary edges starting at `source`. Interior
  // vertices keep the slot position of the edge they lose; the source's
  // sequence is compacted; the last edge is appended to the terminal's
  // primary slots or, for `terminal_slot == Secondary`, takes its secondary
  // slot and marks it volunteered. Returns the terminal.
  VertexId flip_path(std::span<const EdgeId> path, VertexId source,
                     EdgeClass terminal_slot = EdgeClass::Primary);

  // Walks down uniformly chosen primary out-edges from `source` until a
  // vertex with fewer than k primaries is reached or `max_len` steps are taken.
  WalkOutcome random_walk(VertexId source, std::uint32_t max_len, Rng& rng);
  void random_walk(VertexId source, std::uint32_t max_len, Rng& rng, WalkOutcome& out);

  // Frees the edge's slot. A vertex that loses its secondary edge stays
  // volunteered for the rest of the phase.
  void remove_edge(EdgeId id);

  // Starts a new volunteer phase: every vertex may volunteer once more.
  void begin_phase();

  std::uint32_t primary_out_degree(VertexId v) const;
  std::uint32_t out_degree(VertexId v) const;
  std::span<const EdgeId> primary_out(VertexId v) const;
  EdgeId secondary_out(VertexId v) const;
  EdgeId bad_out(VertexId v) const;
  bool volunteered(VertexId v) const;

  bool is_alive(EdgeId id) const { return id < edges_.size() && edges_[id].alive; }
  const EdgeRecord& edge(EdgeId id) const;

  std::uint64_t total_flips() const { return flips_; }
  std::uint64_t total_walk_steps() const { return walk_steps_; }
  std::uint64_t total_edges() const { return edges_installed_; }
  std::size_t alive_edges() const { return alive_; }
  // Writes to edge metadata and volunteer stamps; slot contents are not
  // counted since they mirror the orientation itself.
  std::uint64_t bookkeeping_writes() const { return bookkeeping_writes_; }

  ForestSnapshot snapshot() const;

 private:
  void check_vertex(VertexId v) const;
  EdgeId* primary_begin(VertexId v) { return primary_.data() + static_cast<std::size_t>(v) * k_; }
  const EdgeId* primary_begin(VertexId v) const {
    return primary_.data() + static_cast<std::size_t>(v) * k_;
  }
  void erase_primary(VertexId v, EdgeId id);
  void mark_volunteered(VertexId v);

  std::size_t n_;
  std::uint32_t k_;
  std::vector<EdgeId> primary_;  // n * k, row v holds v's primaries
  std::vector<std::uint16_t> primary_count_;
  std::vector<EdgeId> secondary_;
  std::vector<EdgeId> bad_;
  std::vector<std::uint32_t> volunteer_stamp_;
  std::uint32_t epoch_ = 1;

  std::vector<EdgeRecord> edges_;
  std::vector<EdgeId> free_ids_;

  std::uint64_t flips_ = 0;
  std::uint64_t walk_steps_ = 0;
  std::uint64_t edges_installed_ = 0;
  std::uint64_t bookkeeping_writes_ = 0;
  std::size_t alive_ = 0;
};

}  // namespace dancewalk
