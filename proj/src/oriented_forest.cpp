#include "dancewalk/oriented_forest.hpp"

#include <algorithm>
#include <string>

namespace dancewalk {

namespace {
constexpr std::uint32_t kMaxCapacity = 1024;
}

OrientedForest::OrientedForest(std::size_t n, std::uint32_t k) : n_(n), k_(k) {
  if (n == 0) throw ConfigError("oriented forest needs at least one vertex");
  if (n >= kNoVertex) throw ConfigError("vertex count exceeds 32-bit id space");
  if (k < 2 || k > kMaxCapacity) {
    throw ConfigError("primary capacity must lie in [2, " + std::to_string(kMaxCapacity) + "]");
  }
  primary_.assign(n * k, kNoEdge);
  primary_count_.assign(n, 0);
  secondary_.assign(n, kNoEdge);
  bad_.assign(n, kNoEdge);
  volunteer_stamp_.assign(n, 0);
}

void OrientedForest::check_vertex(VertexId v) const {
  if (v >= n_) throw StructuralError("vertex " + std::to_string(v) + " out of range");
}

const EdgeRecord& OrientedForest::edge(EdgeId id) const {
  if (id >= edges_.size()) throw StructuralError("unknown edge " + std::to_string(id));
  return edges_[id];
}

std::uint32_t OrientedForest::primary_out_degree(VertexId v) const {
  check_vertex(v);
  return primary_count_[v];
}

std::uint32_t OrientedForest::out_degree(VertexId v) const {
  check_vertex(v);
  return primary_count_[v] + (secondary_[v] != kNoEdge ? 1U : 0U) + (bad_[v] != kNoEdge ? 1U : 0U);
}

std::span<const EdgeId> OrientedForest::primary_out(VertexId v) const {
  check_vertex(v);
  return {primary_begin(v), primary_count_[v]};
}

EdgeId OrientedForest::secondary_out(VertexId v) const {
  check_vertex(v);
  return secondary_[v];
}

EdgeId OrientedForest::bad_out(VertexId v) const {
  check_vertex(v);
  return bad_[v];
}

bool OrientedForest::volunteered(VertexId v) const {
  check_vertex(v);
  return volunteer_stamp_[v] == epoch_;
}

void OrientedForest::mark_volunteered(VertexId v) {
  volunteer_stamp_[v] = epoch_;
  ++bookkeeping_writes_;
}

void OrientedForest::begin_phase() {
  ++epoch_;
  ++bookkeeping_writes_;
}

EdgeId OrientedForest::install_edge(VertexId u, VertexId v, VertexId owner, EdgeClass cls) {
  check_vertex(u);
  check_vertex(v);
  if (owner != u && owner != v) throw StructuralError("edge owner must be one of its endpoints");
  if (u == v && cls != EdgeClass::Bad) {
    throw StructuralError("self-loop at vertex " + std::to_string(u) + " is not a forest edge");
  }
  switch (cls) {
    case EdgeClass::Primary:
      if (primary_count_[owner] >= k_) {
        throw StructuralError("primary slots full at vertex " + std::to_string(owner));
      }
      break;
    case EdgeClass::Secondary:
      if (secondary_[owner] != kNoEdge) {
        throw StructuralError("secondary slot full at vertex " + std::to_string(owner));
      }
      break;
    case EdgeClass::Bad:
      if (bad_[owner] != kNoEdge) {
        throw StructuralError("bad slot full at vertex " + std::to_string(owner));
      }
      break;
  }

  EdgeId id;
  if (!free_ids_.empty()) {
    id = free_ids_.back();
    free_ids_.pop_back();
  } else {
    id = static_cast<EdgeId>(edges_.size());
    edges_.emplace_back();
  }
  edges_[id] = EdgeRecord{u, v, owner, cls, true};
  ++bookkeeping_writes_;
  ++edges_installed_;
  ++alive_;

  switch (cls) {
    case EdgeClass::Primary:
      primary_begin(owner)[primary_count_[owner]++] = id;
      break;
    case EdgeClass::Secondary:
      secondary_[owner] = id;
      mark_volunteered(owner);
      break;
    case EdgeClass::Bad:
      bad_[owner] = id;
      break;
  }
  return id;
}

void OrientedForest::erase_primary(VertexId v, EdgeId id) {
  EdgeId* row = primary_begin(v);
  const std::uint16_t count = primary_count_[v];
  EdgeId* end = row + count;
  EdgeId* it = std::find(row, end, id);
  if (it == end) throw StructuralError("edge not found among primaries of its owner");
  std::copy(it + 1, end, it);
  row[count - 1] = kNoEdge;
  --primary_count_[v];
}

VertexId OrientedForest::flip_path(std::span<const EdgeId> path, VertexId source,
                                   EdgeClass terminal_slot) {
  check_vertex(source);
  if (path.empty()) return source;
  if (terminal_slot == EdgeClass::Bad) throw StructuralError("a flip cannot end in a bad slot");

  // Validate the whole chain before touching anything.
  VertexId at = source;
  for (EdgeId id : path) {
    if (!is_alive(id)) throw StructuralError("flip path contains dead edge " + std::to_string(id));
    const EdgeRecord& e = edges_[id];
    if (e.cls != EdgeClass::Primary || e.owner != at) {
      throw StructuralError("flip path is not a directed primary chain at edge " +
                            std::to_string(id));
    }
    at = e.other(at);
  }
  const VertexId terminal = at;
  if (terminal_slot == EdgeClass::Primary && primary_count_[terminal] >= k_) {
    throw StructuralError("flip terminal has no free primary slot");
  }
  if (terminal_slot == EdgeClass::Secondary && secondary_[terminal] != kNoEdge) {
    throw StructuralError("flip terminal has no free secondary slot");
  }

  erase_primary(source, path.front());
  at = source;
  for (std::size_t i = 0; i < path.size(); ++i) {
    EdgeRecord& e = edges_[path[i]];
    const VertexId next = e.other(at);
    e.owner = next;
    if (i + 1 < path.size()) {
      // `next` hands its next path edge down and takes this one in its place.
      EdgeId* row = primary_begin(next);
      EdgeId* slot = std::find(row, row + primary_count_[next], path[i + 1]);
      *slot = path[i];
    }
    at = next;
  }

  const EdgeId last = path.back();
  if (terminal_slot == EdgeClass::Primary) {
    primary_begin(terminal)[primary_count_[terminal]++] = last;
  } else {
    edges_[last].cls = EdgeClass::Secondary;
    secondary_[terminal] = last;
    mark_volunteered(terminal);
  }
  flips_ += path.size();
  return terminal;
}

WalkOutcome OrientedForest::random_walk(VertexId source, std::uint32_t max_len, Rng& rng) {
  WalkOutcome out;
  random_walk(source, max_len, rng, out);
  return out;
}

void OrientedForest::random_walk(VertexId source, std::uint32_t max_len, Rng& rng,
                                 WalkOutcome& out) {
  check_vertex(source);
  if (max_len == 0) throw StructuralError("walk length cap must be at least 1");
  out.path.clear();
  VertexId at = source;
  while (true) {
    const std::uint32_t degree = primary_count_[at];
    if (degree < k_) {
      out.reason = WalkOutcome::Reason::LowDegree;
      break;
    }
    if (out.path.size() == max_len) {
      out.reason = WalkOutcome::Reason::FullLength;
      break;
    }
    const EdgeId id = primary_begin(at)[uniform_below(rng, k_)];
    out.path.push_back(id);
    at = edges_[id].other(at);
  }
  out.terminal = at;
  walk_steps_ += out.path.size();
}

void OrientedForest::remove_edge(EdgeId id) {
  if (!is_alive(id)) throw StructuralError("remove of dead or unknown edge " + std::to_string(id));
  EdgeRecord& e = edges_[id];
  switch (e.cls) {
    case EdgeClass::Primary:
      erase_primary(e.owner, id);
      break;
    case EdgeClass::Secondary:
      secondary_[e.owner] = kNoEdge;
      break;
    case EdgeClass::Bad:
      bad_[e.owner] = kNoEdge;
      break;
  }
  e.alive = false;
  ++bookkeeping_writes_;
  --alive_;
  free_ids_.push_back(id);
}

ForestSnapshot OrientedForest::snapshot() const {
  ForestSnapshot s;
  s.n = n_;
  s.k = k_;
  s.primary_out.resize(n_);
  s.volunteered.resize(n_);
  for (VertexId v = 0; v < n_; ++v) {
    auto row = primary_out(v);
    s.primary_out[v].assign(row.begin(), row.end());
    s.volunteered[v] = volunteer_stamp_[v] == epoch_;
  }
  s.secondary_out = secondary_;
  s.bad_out = bad_;
  s.edges = edges_;
  return s;
}

}  // namespace dancewalk
