#include <set>
#include <sstream>

#include "doctest.h"
#include "dancewalk/harness.hpp"
#include "dancewalk/oracle.hpp"

using namespace dancewalk;
using namespace dancewalk::harness;

namespace {

bool is_spanning_forest(const std::vector<Edge>& edges, std::size_t n, std::size_t expected_edges) {
  if (edges.size() != expected_edges) return false;
  SizeForest uf(n);
  for (auto [u, v] : edges) {
    if (u >= n || v >= n || u == v || uf.same(u, v)) return false;
    uf.unite(u, v);
  }
  return true;
}

std::size_t line_of(const std::string& text, std::size_t n) {
  std::istringstream in(text);
  try {
    parse_edge_list(in, n);
  } catch (const ParseError& e) {
    return e.line();
  }
  return 0;
}

}  // namespace

TEST_CASE("workload names round-trip") {
  for (auto kind : {WorkloadKind::RandomRecursiveTree, WorkloadKind::UniformAttachment, WorkloadKind::Path,
                    WorkloadKind::Star, WorkloadKind::BalancedBinary, WorkloadKind::RandomForest,
                    WorkloadKind::File}) {
    CHECK(parse_workload(to_string(kind)) == kind);
  }
  CHECK_FALSE(parse_workload("lattice").has_value());
}

TEST_CASE("generated workloads are forests") {
  const std::size_t n = 1000;
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    for (auto kind : {WorkloadKind::RandomRecursiveTree, WorkloadKind::UniformAttachment, WorkloadKind::Path,
                      WorkloadKind::Star, WorkloadKind::BalancedBinary}) {
      CHECK(is_spanning_forest(generate_workload({kind, n, seed, {}}), n, n - 1));
    }
    const auto forest = generate_workload({WorkloadKind::RandomForest, n, seed, {}});
    CHECK(forest.size() < n - 1);
    CHECK(forest.size() > n / 2);
    CHECK(is_spanning_forest(forest, n, forest.size()));
  }
  CHECK(generate_workload({WorkloadKind::Path, 1, 0, {}}).empty());
  CHECK(generate_workload({WorkloadKind::UniformAttachment, 2, 0, {}}).size() == 1);
  CHECK_THROWS_AS(generate_workload({WorkloadKind::Path, 0, 0, {}}), ConfigError);
}

TEST_CASE("uniform attachment covers every labelled tree on four vertices") {
  // There are 4^2 = 16 labelled trees on four vertices.
  std::set<std::set<std::pair<VertexId, VertexId>>> seen;
  for (std::uint64_t seed = 0; seed < 2000; ++seed) {
    std::set<std::pair<VertexId, VertexId>> tree;
    for (auto [u, v] : generate_workload({WorkloadKind::UniformAttachment, 4, seed, {}})) {
      tree.emplace(std::min(u, v), std::max(u, v));
    }
    seen.insert(tree);
  }
  CHECK(seen.size() == 16);
}

TEST_CASE("edge lists parse with comments and reject bad lines") {
  std::istringstream in("# tree\n0 1\n\n1 2  # comment\n3 2\n");
  const auto edges = parse_edge_list(in, 4);
  REQUIRE(edges.size() == 3);
  CHECK(edges[2] == Edge{3, 2});

  CHECK(line_of("0 1\n1 0\n", 4) == 2);
  CHECK(line_of("0 1\n2 2\n", 4) == 2);
  CHECK(line_of("0 4\n", 4) == 1);
  CHECK(line_of("0\n", 4) == 1);
  CHECK(line_of("0 1 2\n", 4) == 1);
  CHECK(line_of("# x\n0 a\n", 4) == 2);
  CHECK(line_of("0 1\n1 2\n2 0\n", 4) == 3);
  std::istringstream empty("");
  CHECK_THROWS_AS(parse_edge_list(empty, 0), ConfigError);
}

TEST_CASE("run_orient reports per-trial records") {
  AlgoConfig cfg;
  cfg.variant = Variant::DancingWalkRank;
  const auto trials = run_orient({WorkloadKind::UniformAttachment, 4096, 10, {}}, cfg, {3, 4, 2});
  REQUIRE(trials.size() == 3);
  for (std::size_t r = 0; r < 3; ++r) {
    const auto& t = trials[r];
    CHECK(t.record.seed == r);
    CHECK(t.record.algo == "dancing-rank");
    CHECK(t.insertions == 4095);
    CHECK(t.orientation_ok);
    CHECK(t.record.failures == 0);
    CHECK(t.record.max_out_degree <= 3);
    CHECK(t.record.p99_flips <= t.record.max_flips);
    CHECK(t.record.mean_flips <= t.record.max_flips);
  }
  // Threads do not change the results.
  const auto serial = run_orient({WorkloadKind::UniformAttachment, 4096, 10, {}}, cfg, {3, 4, 1});
  for (std::size_t r = 0; r < 3; ++r) CHECK(serial[r].record.total_flips == trials[r].record.total_flips);

  std::ostringstream csv;
  write_csv(csv, {trials[0].record});
  CHECK(csv.str().rfind("algo,n,k,c,d,seed,max_flips,mean_flips,p99_flips,max_walk_attempts,failures,"
                        "max_out_degree,total_walk_steps,total_flips,wall_time_ns\n",
                        0) == 0);
  std::ostringstream json;
  write_json(json, {trials[0].record});
  CHECK(json.str().find("\"max_out_degree\"") != std::string::npos);
}

TEST_CASE("never-flip on balanced merges reaches out-degree log2 n") {
  AlgoConfig cfg;
  cfg.variant = Variant::NeverFlip;
  const auto trials = run_orient({WorkloadKind::BalancedBinary, 1024, 0, {}}, cfg, {1, 2, 1});
  CHECK(trials[0].record.max_out_degree == 10);
  CHECK(trials[0].orientation_ok);
}

TEST_CASE("scaling rows carry ratios from the second size on") {
  AlgoConfig cfg;
  const auto rows = scaling_report({1024, 4096}, cfg, WorkloadKind::BalancedBinary, 1, 2);
  REQUIRE(rows.size() == 2);
  CHECK_FALSE(rows[0].ratio.has_value());
  REQUIRE(rows[1].ratio.has_value());
  CHECK(*rows[1].ratio > 0);
  std::ostringstream out;
  write_scaling(out, rows);
  CHECK(out.str().rfind("n,trials,mean_walk_steps,mean_flips,ratio,failures\n1024,2,", 0) == 0);
}

TEST_CASE("cuckoo runs report clean instrumentation") {
  const std::size_t n = 2048;
  const Script script = generate_script({n, 0.3, 5000, 4, 2});
  TableConfig cfg;
  cfg.n = n;
  cfg.stash = 4;
  cfg.algo.n = n;
  for (auto provider : {ProviderKind::Seeded, ProviderKind::Tabulation}) {
    const auto rec = run_cuckoo(script, cfg, 9, {true, provider});
    CHECK(rec.error.empty());
    CHECK(rec.oracle_equal == std::optional<bool>{true});
    CHECK(rec.query_pure);
    CHECK(rec.phases_clean);
    CHECK(rec.viability_violations == 0);
    CHECK(rec.inserts + rec.deletes + rec.queries == script.size());
    CHECK(rec.max_d_writes <= 8);
    std::ostringstream csv, json;
    write_cuckoo_csv(csv, {rec});
    write_cuckoo_json(json, {rec});
    CHECK(csv.str().find("stash_high_water") != std::string::npos);
    CHECK(json.str().find("kickout_histogram") != std::string::npos);
  }
}

TEST_CASE("walk tail rows count walks") {
  const auto rows = walk_tail_experiment({256, 1024}, 500, 3);
  REQUIRE(rows.size() == 2);
  for (const auto& r : rows) {
    CHECK(r.walks == 500);
    CHECK(r.fraction() <= 1.0);
  }
}
