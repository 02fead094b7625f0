#include "dancewalk/rank_forest.hpp"

#include <string>

namespace dancewalk {

RankForest::RankForest(std::size_t n) : n_(n), nodes_(n) {
  if (n == 0) throw ConfigError("rank forest needs at least one leaf");
  if (n >= kNoNode / 2) throw ConfigError("rank forest too large for 32-bit node ids");
}

void RankForest::check_vertex(VertexId v) const {
  if (v >= n_) throw StructuralError("vertex " + std::to_string(v) + " out of range");
}

std::uint32_t RankForest::parent(std::uint32_t node) const {
  const Node& x = nodes_[node];
  return x.epoch == epoch_ ? x.parent : kNoNode;
}

std::uint32_t RankForest::root_of(VertexId v) const {
  check_vertex(v);
  std::uint32_t at = v;
  for (std::uint32_t up = parent(at); up != kNoNode; up = parent(at)) at = up;
  return at;
}

std::uint32_t RankForest::rank_of(VertexId v) const {
  check_vertex(v);
  std::uint32_t depth = 0;
  for (std::uint32_t at = parent(v); at != kNoNode; at = parent(at)) ++depth;
  return depth;
}

CombinePlan RankForest::plan(VertexId v1, VertexId v2) const {
  check_vertex(v1);
  check_vertex(v2);
  CombinePlan p;
  p.attach = kNoNode;

  // Lockstep climb. Both chains move one level per round while both can; the
  // first chain to stop has the smaller rank, and the other chain's next node
  // is exactly the attachment point one level above it.
  std::uint32_t a = v1;
  std::uint32_t b = v2;
  std::uint32_t height = 0;
  std::uint32_t up_a = parent(a);
  std::uint32_t up_b = parent(b);
  while (up_a != kNoNode && up_b != kNoNode) {
    a = up_a;
    b = up_b;
    ++height;
    up_a = parent(a);
    up_b = parent(b);
  }
  climb_steps_ += height;

  if (up_a == kNoNode && up_b == kNoNode) {
    p.root_first = a;
    p.root_second = b;
    p.outcome.rank_first = height;
    p.outcome.rank_second = height;
    p.outcome.verdict = a == b ? CombineVerdict::SameTree : CombineVerdict::FirstSmaller;
    return p;
  }

  // Unequal ranks: finish the longer chain to learn its root and rank.
  const bool first_short = up_a == kNoNode;
  std::uint32_t at = first_short ? b : a;
  p.attach = first_short ? up_b : up_a;
  std::uint32_t long_rank = height;
  for (std::uint32_t up = parent(at); up != kNoNode; up = parent(at)) {
    at = up;
    ++long_rank;
  }
  climb_steps_ += long_rank - height;
  if (first_short) {
    p.root_first = a;
    p.root_second = at;
    p.outcome = {CombineVerdict::FirstSmaller, height, long_rank};
  } else {
    p.root_first = at;
    p.root_second = b;
    p.outcome = {CombineVerdict::SecondSmaller, long_rank, height};
  }
  return p;
}

void RankForest::link(std::uint32_t child, std::uint32_t up) {
  nodes_[child] = Node{up, epoch_};
  ++link_writes_;
}

void RankForest::apply(const CombinePlan& p) {
  const CombineOutcome& o = p.outcome;
  if (o.verdict == CombineVerdict::SameTree) return;
  if (o.rank_first == o.rank_second) {
    const auto root = static_cast<std::uint32_t>(nodes_.size());
    nodes_.push_back(Node{kNoNode, epoch_});
    ++node_creations_;
    link(p.root_first, root);
    link(p.root_second, root);
  } else if (o.verdict == CombineVerdict::FirstSmaller) {
    link(p.root_first, p.attach);
  } else {
    link(p.root_second, p.attach);
  }
}

CombineOutcome RankForest::combine(VertexId v1, VertexId v2) {
  const CombinePlan p = plan(v1, v2);
  apply(p);
  return p.outcome;
}

void RankForest::reset() {
  ++epoch_;
  nodes_.resize(n_);
  ++resets_;
}

SizeForest::SizeForest(std::size_t n) : parent_(n), size_(n, 1) {
  if (n == 0) throw ConfigError("size forest needs at least one vertex");
  for (VertexId v = 0; v < n; ++v) parent_[v] = v;
}

VertexId SizeForest::find(VertexId v) const {
  if (v >= parent_.size()) throw StructuralError("vertex " + std::to_string(v) + " out of range");
  while (parent_[v] != v) v = parent_[v];
  return v;
}

SizeUnion SizeForest::compare(VertexId v1, VertexId v2) const {
  const VertexId r1 = find(v1);
  const VertexId r2 = find(v2);
  SizeUnion out;
  out.same = r1 == r2;
  out.size_first = size_[r1];
  out.size_second = size_[r2];
  out.first_smaller = out.size_first <= out.size_second;
  return out;
}

SizeUnion SizeForest::unite(VertexId v1, VertexId v2) {
  const SizeUnion out = compare(v1, v2);
  if (out.same) return out;
  VertexId small = find(v1);
  VertexId large = find(v2);
  if (!out.first_smaller) std::swap(small, large);
  parent_[small] = large;
  size_[large] += size_[small];
  return out;
}

}  // namespace dancewalk
