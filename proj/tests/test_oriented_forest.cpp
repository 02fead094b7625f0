#include <map>
#include <vector>

#include "doctest.h"
#include "dancewalk/oracle.hpp"
#include "dancewalk/oriented_forest.hpp"

using namespace dancewalk;

namespace {

std::vector<EdgeId> row(const OrientedForest& f, VertexId v) {
  auto s = f.primary_out(v);
  return {s.begin(), s.end()};
}

// Complete binary tree on 2^(depth+1)-1 vertices oriented root-down: vertex i
// owns edges to 2i+1 and 2i+2.
OrientedForest binary_tree(std::uint32_t depth) {
  const std::size_t n = (std::size_t{1} << (depth + 1)) - 1;
  OrientedForest f(n, 2);
  for (VertexId i = 0; 2 * i + 2 < n; ++i) {
    f.install_edge(i, 2 * i + 1, i, EdgeClass::Primary);
    f.install_edge(i, 2 * i + 2, i, EdgeClass::Primary);
  }
  return f;
}

}  // namespace

TEST_CASE("constructor validates n and k") {
  CHECK_THROWS_AS(OrientedForest(0, 2), ConfigError);
  CHECK_THROWS_AS(OrientedForest(4, 1), ConfigError);
  CHECK_THROWS_AS(OrientedForest(4, 5000), ConfigError);
  OrientedForest f(4, 3);
  CHECK(f.vertex_count() == 4);
  CHECK(f.capacity() == 3);
  CHECK(f.alive_edges() == 0);
}

TEST_CASE("install_edge fills slot classes and enforces capacity") {
  OrientedForest f(6, 2);
  const EdgeId e0 = f.install_edge(0, 1, 0, EdgeClass::Primary);
  const EdgeId e1 = f.install_edge(0, 2, 0, EdgeClass::Primary);
  CHECK(row(f, 0) == std::vector<EdgeId>{e0, e1});
  CHECK(f.primary_out_degree(0) == 2);
  CHECK_THROWS_AS(f.install_edge(0, 3, 0, EdgeClass::Primary), StructuralError);

  CHECK_FALSE(f.volunteered(0));
  const EdgeId s = f.install_edge(0, 3, 0, EdgeClass::Secondary);
  CHECK(f.secondary_out(0) == s);
  CHECK(f.volunteered(0));
  CHECK_THROWS_AS(f.install_edge(0, 4, 0, EdgeClass::Secondary), StructuralError);

  const EdgeId b = f.install_edge(0, 0, 0, EdgeClass::Bad);
  CHECK(f.bad_out(0) == b);
  CHECK(f.out_degree(0) == 4);
  CHECK_THROWS_AS(f.install_edge(0, 5, 0, EdgeClass::Bad), StructuralError);

  CHECK_THROWS_AS(f.install_edge(2, 2, 2, EdgeClass::Primary), StructuralError);
  CHECK_THROWS_AS(f.install_edge(1, 2, 3, EdgeClass::Primary), StructuralError);
  CHECK_THROWS_AS(f.install_edge(1, 9, 1, EdgeClass::Primary), StructuralError);
  CHECK(f.alive_edges() == 4);
}

TEST_CASE("flip along a three-edge chain") {
  OrientedForest f(4, 2);
  const EdgeId ab = f.install_edge(0, 1, 0, EdgeClass::Primary);
  const EdgeId bc = f.install_edge(1, 2, 1, EdgeClass::Primary);
  const EdgeId cd = f.install_edge(2, 3, 2, EdgeClass::Primary);
  const std::vector<EdgeId> path{ab, bc, cd};
  CHECK(f.flip_path(path, 0) == 3);

  CHECK(row(f, 0).empty());
  CHECK(row(f, 1) == std::vector<EdgeId>{ab});
  CHECK(row(f, 2) == std::vector<EdgeId>{bc});
  CHECK(row(f, 3) == std::vector<EdgeId>{cd});
  CHECK(f.edge(ab).owner == 1);
  CHECK(f.edge(bc).owner == 2);
  CHECK(f.edge(cd).owner == 3);
  CHECK(f.total_flips() == 3);
  CHECK(f.alive_edges() == 3);
  CHECK(oracle::check_orientation(f).ok);
}

TEST_CASE("interior vertices keep the slot position") {
  for (int position = 0; position < 2; ++position) {
    OrientedForest f(5, 2);
    const EdgeId sa = f.install_edge(0, 1, 0, EdgeClass::Primary);
    EdgeId ab = kNoEdge, other = kNoEdge;
    if (position == 0) {
      ab = f.install_edge(1, 2, 1, EdgeClass::Primary);
      other = f.install_edge(1, 3, 1, EdgeClass::Primary);
    } else {
      other = f.install_edge(1, 3, 1, EdgeClass::Primary);
      ab = f.install_edge(1, 2, 1, EdgeClass::Primary);
    }
    const std::vector<EdgeId> path{sa, ab};
    f.flip_path(path, 0);
    const auto expect = position == 0 ? std::vector<EdgeId>{sa, other} : std::vector<EdgeId>{other, sa};
    CHECK(row(f, 1) == expect);
    CHECK(row(f, 2) == std::vector<EdgeId>{ab});
  }
}

TEST_CASE("source sequence is compacted after a flip") {
  OrientedForest f(4, 2);
  const EdgeId first = f.install_edge(0, 1, 0, EdgeClass::Primary);
  const EdgeId second = f.install_edge(0, 2, 0, EdgeClass::Primary);
  const std::vector<EdgeId> path{first};
  f.flip_path(path, 0);
  CHECK(row(f, 0) == std::vector<EdgeId>{second});
  CHECK(row(f, 1) == std::vector<EdgeId>{first});
}

TEST_CASE("flip into a secondary slot marks the terminal volunteered") {
  OrientedForest f(5, 2);
  const EdgeId sa = f.install_edge(0, 1, 0, EdgeClass::Primary);
  f.install_edge(1, 2, 1, EdgeClass::Primary);
  f.install_edge(1, 3, 1, EdgeClass::Primary);
  const std::vector<EdgeId> path{sa};
  CHECK(f.flip_path(path, 0, EdgeClass::Secondary) == 1);
  CHECK(f.secondary_out(1) == sa);
  CHECK(f.edge(sa).cls == EdgeClass::Secondary);
  CHECK(f.volunteered(1));
  CHECK(f.primary_out_degree(1) == 2);
  CHECK(oracle::check_orientation(f).ok);
}

TEST_CASE("invalid flips leave the state untouched") {
  OrientedForest f(5, 2);
  const EdgeId ab = f.install_edge(0, 1, 0, EdgeClass::Primary);
  const EdgeId cd = f.install_edge(2, 3, 2, EdgeClass::Primary);
  const auto before = f.snapshot();
  const std::vector<EdgeId> broken{ab, cd};
  CHECK_THROWS_AS(f.flip_path(broken, 0), StructuralError);
  const std::vector<EdgeId> wrong_source{ab};
  CHECK_THROWS_AS(f.flip_path(wrong_source, 1), StructuralError);
  CHECK_THROWS_AS(f.flip_path(wrong_source, 0, EdgeClass::Bad), StructuralError);
  const auto after = f.snapshot();
  CHECK(after.primary_out == before.primary_out);
  CHECK(f.total_flips() == 0);

  f.install_edge(1, 4, 1, EdgeClass::Primary);
  f.install_edge(1, 2, 1, EdgeClass::Primary);
  CHECK_THROWS_AS(f.flip_path(wrong_source, 0), StructuralError);  // terminal full
}

TEST_CASE("walk from a two-leaf root takes each branch") {
  std::map<VertexId, int> seen;
  const int trials = 4000;
  for (int seed = 0; seed < trials; ++seed) {
    OrientedForest f(3, 2);
    f.install_edge(0, 1, 0, EdgeClass::Primary);
    f.install_edge(0, 2, 0, EdgeClass::Primary);
    Rng rng(seed);
    const WalkOutcome w = f.random_walk(0, 8, rng);
    REQUIRE(w.path.size() == 1);
    CHECK(w.reason == WalkOutcome::Reason::LowDegree);
    CHECK(f.edge(w.path[0]).other(0) == w.terminal);
    ++seen[w.terminal];
  }
  REQUIRE(seen.size() == 2);
  // Binomial(4000, 1/2): sd ~ 31.6, allow five.
  CHECK(std::abs(seen[1] - trials / 2) < 160);
}

TEST_CASE("walk on a depth-3 binary tree stops at the cap") {
  for (std::uint64_t seed = 0; seed < 64; ++seed) {
    OrientedForest f = binary_tree(3);
    Rng rng(seed);
    const WalkOutcome w = f.random_walk(0, 2, rng);
    CHECK(w.path.size() == 2);
    CHECK(w.reason == WalkOutcome::Reason::FullLength);
    CHECK(w.terminal >= 3);
    CHECK(w.terminal <= 6);
  }
  OrientedForest f = binary_tree(3);
  Rng rng(1);
  const WalkOutcome w = f.random_walk(0, 10, rng);
  CHECK(w.path.size() == 3);
  CHECK(w.reason == WalkOutcome::Reason::LowDegree);
  CHECK(w.terminal >= 7);
  CHECK(f.total_walk_steps() == 3);
  CHECK_THROWS_AS(f.random_walk(0, 0, rng), StructuralError);
}

TEST_CASE("walk from a vertex below capacity is empty") {
  OrientedForest f(3, 2);
  f.install_edge(0, 1, 0, EdgeClass::Primary);
  Rng rng(3);
  const WalkOutcome w = f.random_walk(0, 4, rng);
  CHECK(w.path.empty());
  CHECK(w.terminal == 0);
  CHECK(w.reason == WalkOutcome::Reason::LowDegree);
}

TEST_CASE("remove_edge frees slots and recycles ids") {
  OrientedForest f(4, 2);
  const EdgeId a = f.install_edge(0, 1, 0, EdgeClass::Primary);
  const EdgeId b = f.install_edge(0, 2, 0, EdgeClass::Primary);
  const EdgeId s = f.install_edge(0, 3, 0, EdgeClass::Secondary);
  f.remove_edge(a);
  CHECK(row(f, 0) == std::vector<EdgeId>{b});
  CHECK_FALSE(f.is_alive(a));
  CHECK_THROWS_AS(f.remove_edge(a), StructuralError);
  f.remove_edge(s);
  CHECK(f.secondary_out(0) == kNoEdge);
  CHECK(f.volunteered(0));
  f.begin_phase();
  CHECK_FALSE(f.volunteered(0));
  const EdgeId again = f.install_edge(1, 2, 1, EdgeClass::Primary);
  CHECK((again == a || again == s));
  CHECK(f.alive_edges() == 2);
  CHECK(oracle::check_orientation(f).ok);
}

TEST_CASE("checker flags hand-corrupted snapshots") {
  OrientedForest f(4, 2);
  const EdgeId a = f.install_edge(0, 1, 0, EdgeClass::Primary);
  f.install_edge(1, 2, 1, EdgeClass::Primary);
  REQUIRE(oracle::check_orientation(f).ok);

  SUBCASE("edge stored twice") {
    auto s = f.snapshot();
    s.primary_out[2].push_back(a);
    const auto r = oracle::check_orientation(s);
    CHECK_FALSE(r.ok);
    CHECK(std::find(r.offending_edges.begin(), r.offending_edges.end(), a) != r.offending_edges.end());
  }
  SUBCASE("owner not an endpoint") {
    auto s = f.snapshot();
    s.edges[a].owner = 3;
    CHECK_FALSE(oracle::check_orientation(s).ok);
  }
  SUBCASE("cycle among primaries") {
    auto s = f.snapshot();
    s.edges.push_back(EdgeRecord{2, 0, 2, EdgeClass::Primary, true});
    s.primary_out[2].push_back(static_cast<EdgeId>(s.edges.size() - 1));
    CHECK_FALSE(oracle::check_orientation(s).ok);
  }
  SUBCASE("capacity exceeded") {
    auto s = f.snapshot();
    s.k = 0;
    CHECK_FALSE(oracle::check_orientation(s).ok);
  }
  SUBCASE("secondary without volunteering") {
    auto s = f.snapshot();
    s.primary_out[0].clear();
    s.edges[a].cls = EdgeClass::Secondary;
    s.secondary_out[0] = a;
    CHECK_FALSE(oracle::check_orientation(s).ok);
  }
  SUBCASE("degree limit") {
    CHECK_FALSE(oracle::check_orientation(f, {.max_out_degree = 0}).ok);
  }
}

TEST_CASE("random flips conserve the edge set") {
  // Grow random recursive trees, then repeatedly walk and flip uncapped paths
  // to a low-degree terminal, checking invariants throughout.
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    Rng rng(seed);
    const std::size_t n = 200;
    OrientedForest f(n, 2);
    std::vector<std::pair<VertexId, VertexId>> undirected;
    for (VertexId v = 1; v < n; ++v) {
      const VertexId u = uniform_below(rng, v);
      const VertexId owner = f.primary_out_degree(u) < 2 ? u : v;
      f.install_edge(u, v, owner, EdgeClass::Primary);
      undirected.emplace_back(std::min(u, v), std::max(u, v));
    }
    std::sort(undirected.begin(), undirected.end());
    for (int step = 0; step < 300; ++step) {
      const VertexId s = uniform_below(rng, static_cast<std::uint32_t>(n));
      const WalkOutcome w = f.random_walk(s, 1000, rng);
      if (w.path.empty() || w.reason != WalkOutcome::Reason::LowDegree) continue;
      const std::size_t before = f.total_flips();
      f.flip_path(w.path, s);
      CHECK(f.total_flips() == before + w.path.size());
    }
    std::vector<std::pair<VertexId, VertexId>> now;
    for (const auto& e : f.snapshot().edges) {
      if (e.alive) now.emplace_back(std::min(e.a, e.b), std::max(e.a, e.b));
    }
    std::sort(now.begin(), now.end());
    CHECK(now == undirected);
    CHECK(oracle::check_orientation(f, {.max_out_degree = 2, .allow_bad = false}).ok);
  }
}
