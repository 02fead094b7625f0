#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "dancewalk/common.hpp"

namespace dancewalk {

enum class CombineVerdict : std::uint8_t { FirstSmaller, SecondSmaller, SameTree };

struct CombineOutcome {
  CombineVerdict verdict = CombineVerdict::SameTree;
  std::uint32_t rank_first = 0;
  std::uint32_t rank_second = 0;
};

// A combine split into its read-only half and its mutation. `plan` climbs the
// two leaf-to-root chains; `apply` adds the parent links. Applying a plan
// after any other mutation of the forest is undefined.
struct CombinePlan {
  CombineOutcome outcome;
  std::uint32_t root_first = 0;
  std::uint32_t root_second = 0;
  // Node at height (smaller rank + 1) on the larger tree's chain, or
  // kNoNode when the ranks are equal.
  std::uint32_t attach = 0;
};

// Combination-rank maintenance with rank trees.
//
// Every vertex is a leaf; the leaves of one component sit at a common depth
// equal to the component's combination rank. Merging two components of
// different rank hangs the smaller tree's root under the node of matching
// height in the larger tree; merging equal ranks adds a new root. A combine
// therefore writes at most two parent links and creates at most one node.
//
// reset() starts a fresh epoch in O(1): nodes stamped with an older epoch read
// as parentless singletons.
class RankForest {
 public:
  static constexpr std::uint32_t kNoNode = 0xffffffffU;

  explicit RankForest(std::size_t n);

  std::size_t leaf_count() const { return n_; }

  CombinePlan plan(VertexId v1, VertexId v2) const;
  void apply(const CombinePlan& plan);
  CombineOutcome combine(VertexId v1, VertexId v2);

  std::uint32_t rank_of(VertexId v) const;
  std::uint32_t root_of(VertexId v) const;
  // Parent of any node (leaf ids are the vertex ids), kNoNode at a root.
  std::uint32_t parent(std::uint32_t node) const;
  std::size_t node_count() const { return nodes_.size(); }

  void reset();

  std::uint64_t link_writes() const { return link_writes_; }
  std::uint64_t node_creations() const { return node_creations_; }
  std::uint64_t writes() const { return link_writes_ + node_creations_ + resets_; }
  std::uint64_t climb_steps() const { return climb_steps_; }

 private:
  struct Node {
    std::uint32_t parent = kNoNode;
    std::uint32_t epoch = 0;
  };

  void check_vertex(VertexId v) const;
  void link(std::uint32_t child, std::uint32_t parent);

  std::size_t n_;
  std::vector<Node> nodes_;
  std::uint32_t epoch_ = 1;
  std::uint64_t link_writes_ = 0;
  std::uint64_t node_creations_ = 0;
  std::uint64_t resets_ = 0;
  mutable std::uint64_t climb_steps_ = 0;
};

struct SizeUnion {
  bool same = false;
  bool first_smaller = true;
  std::uint32_t size_first = 0;
  std::uint32_t size_second = 0;
};

// Union-find with union by size and no path compression, so every find is
// worst-case O(log n).
class SizeForest {
 public:
  explicit SizeForest(std::size_t n);

  VertexId find(VertexId v) const;
  std::uint32_t size_of(VertexId v) const { return size_[find(v)]; }
  bool same(VertexId v1, VertexId v2) const { return find(v1) == find(v2); }

  // Sizes of both components and which one is smaller (ties go to the first).
  SizeUnion compare(VertexId v1, VertexId v2) const;
  SizeUnion unite(VertexId v1, VertexId v2);

 private:
  std::vector<VertexId> parent_;
  std::vector<std::uint32_t> size_;
};

}  // namespace dancewalk
