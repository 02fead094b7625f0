#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "dancewalk/algorithms.hpp"
#include "dancewalk/cuckoo.hpp"
#include "dancewalk/script.hpp"

namespace dancewalk::harness {

using Edge = std::pair<VertexId, VertexId>;

enum class WorkloadKind : std::uint8_t {
  RandomRecursiveTree,
  UniformAttachment,
  Path,
  Star,
  BalancedBinary,
  RandomForest,
  File,
};

std::string_view to_string(WorkloadKind kind);
std::optional<WorkloadKind> parse_workload(std::string_view name);

struct WorkloadSpec {
  WorkloadKind kind = WorkloadKind::RandomRecursiveTree;
  std::size_t n = 0;
  std::uint64_t seed = 0;
  std::string path;  // for File
};

// Edge arrival order over n vertices; always a forest.
//   path:                  (0,1), (1,2), ...
//   star:                  (0,i)
//   random-recursive-tree: vertex i attaches to a uniform j < i
//   uniform-attachment:    uniform labelled tree (random Pruefer code), edges shuffled
//   balanced-binary:       rounds of merges (i, i + 2^r) for i a multiple of 2^(r+1)
//   random-forest:         as random-recursive-tree, but each vertex starts a new
//                          tree with probability 1/8
std::vector<Edge> generate_workload(const WorkloadSpec& spec);

// Edge-list text: one `u v` pair per line; blank lines and `#` comments skipped.
// Endpoints must lie in [0, n) and the edges must form a forest.
std::vector<Edge> parse_edge_list(std::istream& in, std::size_t n);

struct RunRecord {
  std::string algo;
  std::size_t n = 0;
  std::uint32_t k = 0;
  double c = 0;
  double d = 0;
  std::uint64_t seed = 0;
  std::uint32_t max_flips = 0;
  double mean_flips = 0;
  std::uint32_t p99_flips = 0;
  std::uint32_t max_walk_attempts = 0;
  std::uint64_t failures = 0;
  std::uint32_t max_out_degree = 0;
  std::uint64_t total_walk_steps = 0;
  std::uint64_t total_flips = 0;
  std::uint64_t wall_time_ns = 0;
};

struct OrientTrial {
  RunRecord record;
  std::uint64_t insertions = 0;
  bool orientation_ok = true;
  std::string violation;
};

struct OrientOptions {
  std::size_t repetitions = 1;
  // Orientation sweeps at seeded-random insertion indices, plus one at the end.
  std::size_t checkpoints = 0;
  std::size_t threads = 1;
};

// Trial r uses seed `base seed + r` for both the workload and the algorithm.
std::vector<OrientTrial> run_orient(const WorkloadSpec& workload, const AlgoConfig& config,
                                    const OrientOptions& options);

void write_csv(std::ostream& out, const std::vector<RunRecord>& records);
void write_json(std::ostream& out, const std::vector<RunRecord>& records);

struct ScalingRow {
  std::size_t n = 0;
  std::size_t trials = 0;
  double mean_walk_steps = 0;  // per insertion
  double mean_flips = 0;       // per insertion
  std::optional<double> ratio;  // mean_walk_steps / previous row's
  std::uint64_t failures = 0;
};

std::vector<ScalingRow> scaling_report(const std::vector<std::size_t>& sizes, const AlgoConfig& config,
                                       WorkloadKind workload, std::uint64_t seed,
                                       std::size_t repetitions, std::size_t threads = 1);
void write_scaling(std::ostream& out, const std::vector<ScalingRow>& rows);

struct CuckooRunRecord {
  std::size_t n = 0;
  double epsilon = 0;
  std::size_t stash = 0;
  std::uint64_t seed = 0;
  std::size_t operations = 0;
  std::uint64_t inserts = 0;
  std::uint64_t deletes = 0;
  std::uint64_t queries = 0;
  std::uint32_t max_kickouts = 0;
  double mean_kickouts = 0;
  std::uint32_t p99_kickouts = 0;
  std::size_t stash_high_water = 0;
  std::uint64_t viability_violations = 0;
  std::uint64_t failures = 0;
  std::uint64_t max_d_writes = 0;
  std::uint64_t max_rebuild_d_writes = 0;
  bool query_pure = true;
  bool phases_clean = true;
  std::optional<bool> oracle_equal;
  std::uint64_t p99_op_latency_ns = 0;
  std::uint64_t wall_time_ns = 0;
  std::map<std::uint32_t, std::uint64_t> kickout_histogram;
  std::string error;
};

enum class ProviderKind : std::uint8_t { Seeded, Tabulation };

struct CuckooOptions {
  bool oracle = false;
  ProviderKind provider = ProviderKind::Seeded;
};

// Replays one script through a fresh table. `config.algo.seed` seeds the
// walks; `provider_seed` seeds the hash pair.
CuckooRunRecord run_cuckoo(const Script& script, const TableConfig& config,
                           std::uint64_t provider_seed, const CuckooOptions& options);

void write_cuckoo_csv(std::ostream& out, const std::vector<CuckooRunRecord>& records);
void write_cuckoo_json(std::ostream& out, const std::vector<CuckooRunRecord>& records);

std::shared_ptr<const HashPairProvider> make_provider(ProviderKind kind, std::uint64_t seed, std::size_t n);

// Uncapped walks from random full vertices in rank-based orientations of
// uniform random labelled trees of each size m. Counts walks longer than 4 log2 m.
struct WalkTailRow {
  std::size_t m = 0;
  std::uint64_t walks = 0;
  std::uint64_t long_walks = 0;
  double fraction() const { return walks == 0 ? 0.0 : static_cast<double>(long_walks) / static_cast<double>(walks); }
};

std::vector<WalkTailRow> walk_tail_experiment(const std::vector<std::size_t>& sizes,
                                              std::size_t walks_per_size, std::uint64_t seed);

}  // namespace dancewalk::harness
