#include <bit>
#include <numeric>
#include <vector>

#include "doctest.h"
#include "dancewalk/rank_forest.hpp"

using namespace dancewalk;

namespace {

// Reference bookkeeping: explicit component lists and the rank recurrence.
struct ReferenceRanks {
  std::vector<std::uint32_t> comp;
  std::vector<std::vector<VertexId>> members;
  std::vector<std::uint32_t> rank;

  explicit ReferenceRanks(std::size_t n) : comp(n), members(n), rank(n, 0) {
    for (VertexId v = 0; v < n; ++v) {
      comp[v] = v;
      members[v] = {v};
    }
  }
  void merge(VertexId a, VertexId b) {
    std::uint32_t ca = comp[a], cb = comp[b];
    const std::uint32_t r = rank[ca] == rank[cb] ? rank[ca] + 1 : std::max(rank[ca], rank[cb]);
    for (VertexId v : members[cb]) comp[v] = ca;
    members[ca].insert(members[ca].end(), members[cb].begin(), members[cb].end());
    members[cb].clear();
    rank[ca] = r;
  }
};

}  // namespace

TEST_CASE("singletons have rank zero") {
  RankForest r(5);
  for (VertexId v = 0; v < 5; ++v) {
    CHECK(r.rank_of(v) == 0);
    CHECK(r.root_of(v) == v);
  }
  CHECK(r.writes() == 0);
  CHECK_THROWS_AS(RankForest(0), ConfigError);
  CHECK_THROWS_AS(r.rank_of(5), StructuralError);
}

TEST_CASE("four singletons merge pairwise to rank two") {
  RankForest r(4);
  auto o = r.combine(0, 1);
  CHECK(o.verdict == CombineVerdict::FirstSmaller);
  CHECK(o.rank_first == 0);
  CHECK(o.rank_second == 0);
  r.combine(2, 3);
  o = r.combine(0, 2);
  CHECK(o.rank_first == 1);
  CHECK(o.rank_second == 1);
  for (VertexId v = 0; v < 4; ++v) CHECK(r.rank_of(v) == 2);
  CHECK(r.combine(1, 3).verdict == CombineVerdict::SameTree);
  CHECK(r.node_count() == 4 + 3);
}

TEST_CASE("unequal ranks attach without raising the rank") {
  RankForest r(3);
  r.combine(0, 1);
  const auto o = r.combine(0, 2);
  CHECK(o.verdict == CombineVerdict::SecondSmaller);
  CHECK(o.rank_first == 1);
  CHECK(o.rank_second == 0);
  for (VertexId v = 0; v < 3; ++v) CHECK(r.rank_of(v) == 1);
  CHECK(r.root_of(2) == r.root_of(0));
  const auto back = r.plan(2, 1);
  CHECK(back.outcome.verdict == CombineVerdict::SameTree);
}

TEST_CASE("balanced merges of 2^j leaves reach rank j") {
  for (std::uint32_t j = 0; j <= 10; ++j) {
    const std::size_t n = std::size_t{1} << j;
    RankForest r(n);
    for (std::size_t half = 1; half < n; half *= 2) {
      for (std::size_t i = 0; i + half < n; i += 2 * half) {
        r.combine(static_cast<VertexId>(i), static_cast<VertexId>(i + half));
      }
    }
    for (VertexId v = 0; v < n; ++v) REQUIRE(r.rank_of(v) == j);
  }
}

TEST_CASE("plan is read-only and apply performs it") {
  RankForest r(4);
  r.combine(0, 1);
  const auto writes = r.writes();
  const auto p = r.plan(1, 2);
  CHECK(r.writes() == writes);
  CHECK(r.rank_of(2) == 0);
  CHECK(p.outcome.verdict == CombineVerdict::SecondSmaller);
  r.apply(p);
  CHECK(r.rank_of(2) == 1);
  CHECK(r.writes() == writes + 1);
}

TEST_CASE("reset returns every leaf to a singleton") {
  RankForest r(8);
  for (VertexId v = 1; v < 8; ++v) r.combine(0, v);
  REQUIRE(r.rank_of(7) > 0);
  r.reset();
  for (VertexId v = 0; v < 8; ++v) {
    CHECK(r.rank_of(v) == 0);
    CHECK(r.root_of(v) == v);
  }
  CHECK(r.node_count() == 8);
  CHECK(r.combine(3, 4).verdict == CombineVerdict::FirstSmaller);
  CHECK(r.rank_of(4) == 1);
}

TEST_CASE("random merges match the rank recurrence") {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    Rng rng(seed);
    const std::size_t n = 300;
    RankForest r(n);
    ReferenceRanks ref(n);
    std::vector<VertexId> order(n);
    std::iota(order.begin(), order.end(), 0);
    for (int round = 0; round < 2000; ++round) {
      const VertexId a = uniform_below(rng, n);
      const VertexId b = uniform_below(rng, n);
      const auto links = r.link_writes();
      const auto nodes = r.node_creations();
      const auto o = r.combine(a, b);
      CHECK(r.link_writes() - links <= 2);
      CHECK(r.node_creations() - nodes <= 1);
      if (ref.comp[a] == ref.comp[b]) {
        REQUIRE(o.verdict == CombineVerdict::SameTree);
        continue;
      }
      const std::uint32_t ra = ref.rank[ref.comp[a]], rb = ref.rank[ref.comp[b]];
      REQUIRE(o.rank_first == ra);
      REQUIRE(o.rank_second == rb);
      REQUIRE(o.verdict == (ra <= rb ? CombineVerdict::FirstSmaller : CombineVerdict::SecondSmaller));
      ref.merge(a, b);
      const std::uint32_t c = ref.comp[a];
      const std::size_t size = ref.members[c].size();
      CHECK(ref.rank[c] <= static_cast<std::uint32_t>(std::bit_width(size) - 1));
      for (VertexId v : ref.members[c]) REQUIRE(r.rank_of(v) == ref.rank[c]);
    }
  }
}

TEST_CASE("size forest compares and unites by size") {
  SizeForest s(6);
  auto u = s.compare(0, 1);
  CHECK(u.first_smaller);
  CHECK_FALSE(u.same);
  s.unite(0, 1);
  s.unite(0, 2);
  CHECK(s.size_of(2) == 3);
  u = s.compare(0, 3);
  CHECK_FALSE(u.first_smaller);
  CHECK(u.size_first == 3);
  CHECK(u.size_second == 1);
  CHECK(s.same(1, 2));
  CHECK(s.unite(1, 2).same);
  CHECK_THROWS_AS(s.find(6), StructuralError);
}
