#include "dancewalk/harness.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <chrono>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <thread>
#include <unordered_map>
#include <unordered_set>

#include <nlohmann/json.hpp>

#include "dancewalk/oracle.hpp"

namespace dancewalk::harness {

namespace {

using Clock = std::chrono::steady_clock;

std::uint64_t elapsed_ns(Clock::time_point since) {
  return static_cast<std::uint64_t>(
      std::chrono::duration_cast<std::chrono::nanoseconds>(Clock::now() - since).count());
}

template <typename Fn>
void parallel_for(std::size_t count, std::size_t threads, Fn&& fn) {
  threads = std::max<std::size_t>(1, std::min(threads, count));
  if (threads == 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::jthread> pool;
  for (std::size_t t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) fn(i);
    });
  }
}

// Smallest value v with at least 99% of the mass at or below v.
template <typename Histogram>
std::uint32_t p99(const Histogram& hist, std::uint64_t total) {
  if (total == 0) return 0;
  const auto need = static_cast<std::uint64_t>(std::ceil(0.99 * static_cast<double>(total)));
  std::uint64_t seen = 0;
  for (const auto& [value, count] : hist) {
    seen += count;
    if (seen >= need) return static_cast<std::uint32_t>(value);
  }
  return 0;
}

std::uint32_t degree_limit(const AlgoConfig& config) {
  switch (config.variant) {
    case Variant::NeverFlip:
      return config.n <= 1 ? 0U : static_cast<std::uint32_t>(std::bit_width(config.n - 1));
    case Variant::FlipAll: return 1;
    default: return config.k + 1;
  }
}

OrientTrial run_trial(const WorkloadSpec& base, const AlgoConfig& base_config,
                      const OrientOptions& options, std::size_t rep) {
  WorkloadSpec spec = base;
  spec.seed = base.seed + rep;
  const std::vector<Edge> edges = generate_workload(spec);

  AlgoConfig config = base_config;
  config.n = base.n;
  config.seed = base_config.seed + rep;

  OrientTrial trial;
  RunRecord& r = trial.record;
  r.algo = std::string(to_string(config.variant));
  r.n = config.n;
  r.k = config.k;
  r.c = config.c;
  r.d = config.d;
  r.seed = config.seed;

  std::unordered_set<std::size_t> checkpoints;
  if (options.checkpoints > 0 && !edges.empty()) {
    Rng pick(config.seed ^ 0x3c6ef372fe94f82bULL);
    while (checkpoints.size() < std::min(options.checkpoints, edges.size())) {
      checkpoints.insert(uniform_below(pick, static_cast<std::uint32_t>(edges.size())));
    }
  }
  const oracle::OrientationLimits limits{degree_limit(config), false};
  auto sweep = [&](const Orienter& o) {
    if (!trial.orientation_ok) return;
    const auto report = oracle::check_orientation(o.forest(), limits);
    if (!report.ok) {
      trial.orientation_ok = false;
      trial.violation = report.violations.empty() ? "orientation check failed" : report.violations.front();
    }
  };

  Orienter orienter(config);
  std::map<std::uint32_t, std::uint64_t> flips;
  std::uint64_t ns = 0;
  for (std::size_t i = 0; i < edges.size(); ++i) {
    const auto start = Clock::now();
    InsertReport rep_i;
    try {
      rep_i = orienter.insert(edges[i].first, edges[i].second);
    } catch (const FailureError&) {
      ns += elapsed_ns(start);
      ++r.failures;
      break;
    }
    ns += elapsed_ns(start);
    ++trial.insertions;
    ++flips[rep_i.flips];
    r.max_flips = std::max(r.max_flips, rep_i.flips);
    r.max_walk_attempts = std::max(r.max_walk_attempts, rep_i.walk_attempts);
    r.total_flips += rep_i.flips;
    r.total_walk_steps += rep_i.walk_steps;
    if (checkpoints.contains(i)) sweep(orienter);
  }
  if (options.checkpoints > 0) sweep(orienter);

  r.mean_flips = trial.insertions == 0 ? 0.0
                                       : static_cast<double>(r.total_flips) / static_cast<double>(trial.insertions);
  r.p99_flips = p99(flips, trial.insertions);
  r.max_out_degree = orienter.max_out_degree();
  r.wall_time_ns = ns;
  return trial;
}

}  // namespace

std::vector<OrientTrial> run_orient(const WorkloadSpec& workload, const AlgoConfig& config,
                                    const OrientOptions& options) {
  std::vector<OrientTrial> trials(options.repetitions);
  parallel_for(options.repetitions, options.threads,
               [&](std::size_t rep) { trials[rep] = run_trial(workload, config, options, rep); });
  return trials;
}

void write_csv(std::ostream& out, const std::vector<RunRecord>& records) {
  out << "algo,n,k,c,d,seed,max_flips,mean_flips,p99_flips,max_walk_attempts,failures,"
         "max_out_degree,total_walk_steps,total_flips,wall_time_ns\n";
  for (const RunRecord& r : records) {
    out << r.algo << ',' << r.n << ',' << r.k << ',' << r.c << ',' << r.d << ',' << r.seed << ','
        << r.max_flips << ',' << std::fixed << std::setprecision(6) << r.mean_flips
        << std::defaultfloat << ',' << r.p99_flips << ',' << r.max_walk_attempts << ','
        << r.failures << ',' << r.max_out_degree << ',' << r.total_walk_steps << ','
        << r.total_flips << ',' << r.wall_time_ns << '\n';
  }
}

void write_json(std::ostream& out, const std::vector<RunRecord>& records) {
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (const RunRecord& r : records) {
    rows.push_back({{"algo", r.algo},
                    {"n", r.n},
                    {"k", r.k},
                    {"c", r.c},
                    {"d", r.d},
                    {"seed", r.seed},
                    {"max_flips", r.max_flips},
                    {"mean_flips", r.mean_flips},
                    {"p99_flips", r.p99_flips},
                    {"max_walk_attempts", r.max_walk_attempts},
                    {"failures", r.failures},
                    {"max_out_degree", r.max_out_degree},
                    {"total_walk_steps", r.total_walk_steps},
                    {"total_flips", r.total_flips},
                    {"wall_time_ns", r.wall_time_ns}});
  }
  out << rows.dump(2) << '\n';
}

std::vector<ScalingRow> scaling_report(const std::vector<std::size_t>& sizes, const AlgoConfig& config,
                                       WorkloadKind workload, std::uint64_t seed,
                                       std::size_t repetitions, std::size_t threads) {
  std::vector<ScalingRow> rows;
  for (std::size_t n : sizes) {
    WorkloadSpec spec{workload, n, seed, {}};
    AlgoConfig cfg = config;
    cfg.n = n;
    cfg.seed = seed;
    const auto trials = run_orient(spec, cfg, OrientOptions{repetitions, 0, threads});
    ScalingRow row;
    row.n = n;
    row.trials = trials.size();
    std::uint64_t steps = 0;
    std::uint64_t flips = 0;
    std::uint64_t inserts = 0;
    for (const auto& t : trials) {
      steps += t.record.total_walk_steps;
      flips += t.record.total_flips;
      inserts += t.insertions;
      row.failures += t.record.failures;
    }
    if (inserts > 0) {
      row.mean_walk_steps = static_cast<double>(steps) / static_cast<double>(inserts);
      row.mean_flips = static_cast<double>(flips) / static_cast<double>(inserts);
    }
    if (!rows.empty() && rows.back().mean_walk_steps > 0) {
      row.ratio = row.mean_walk_steps / rows.back().mean_walk_steps;
    }
    rows.push_back(row);
  }
  return rows;
}

void write_scaling(std::ostream& out, const std::vector<ScalingRow>& rows) {
  out << "n,trials,mean_walk_steps,mean_flips,ratio,failures\n";
  out << std::fixed << std::setprecision(3);
  for (const ScalingRow& r : rows) {
    out << r.n << ',' << r.trials << ',' << r.mean_walk_steps << ',' << r.mean_flips << ',';
    if (r.ratio) out << *r.ratio;
    out << ',' << r.failures << '\n';
  }
  out << std::defaultfloat;
}

std::shared_ptr<const HashPairProvider> make_provider(ProviderKind kind, std::uint64_t seed, std::size_t n) {
  return kind == ProviderKind::Tabulation ? tabulation_provider(seed, n) : seeded_provider(seed, n);
}

CuckooRunRecord run_cuckoo(const Script& script, const TableConfig& config,
                           std::uint64_t provider_seed, const CuckooOptions& options) {
  CuckooRunRecord rec;
  rec.n = config.n;
  rec.epsilon = config.epsilon;
  rec.stash = config.stash;
  rec.seed = config.algo.seed;
  rec.operations = script.size();

  CuckooTable table(config, make_provider(options.provider, provider_seed, config.n));
  oracle::InstrumentedTable probe(table);
  std::unordered_map<Key, Value> reference;
  std::vector<std::uint64_t> latencies;
  latencies.reserve(script.size());

  const auto run_start = Clock::now();
  for (std::size_t i = 0; i < script.size() && rec.error.empty(); ++i) {
    const ScriptOp& op = script[i];
    const auto start = Clock::now();
    try {
      switch (op.kind) {
        case OpKind::Insert:
          probe.insert(op.key, op.value);
          if (options.oracle) reference[op.key] = op.value;
          break;
        case OpKind::Delete:
          probe.erase(op.key);
          if (options.oracle) reference.erase(op.key);
          break;
        case OpKind::Query: {
          const auto got = probe.query(op.key);
          if (options.oracle) {
            const auto it = reference.find(op.key);
            const bool match = it == reference.end() ? !got.has_value() : (got && *got == it->second);
            if (!match) {
              rec.oracle_equal = false;
              rec.error = "op " + std::to_string(i) + ": query disagrees with reference";
            }
          }
          break;
        }
      }
    } catch (const ViabilityViolation& e) {
      ++rec.viability_violations;
      rec.error = "op " + std::to_string(i) + ": " + e.what();
    } catch (const FailureError& e) {
      ++rec.failures;
      rec.error = "op " + std::to_string(i) + ": " + e.what();
    }
    latencies.push_back(elapsed_ns(start));
  }
  rec.wall_time_ns = elapsed_ns(run_start);

  if (options.oracle && rec.error.empty()) {
    bool equal = table.size() == reference.size();
    for (const auto& [key, value] : reference) {
      if (!equal) break;
      const auto got = table.query(key);
      equal = got && *got == value;
    }
    rec.oracle_equal = equal;
    if (!equal) rec.error = "final membership differs from reference";
  }

  probe.sweep_occupancy();
  const auto& c = probe.counters();
  const TableStats& s = table.stats();
  rec.inserts = s.inserts;
  rec.deletes = s.deletes;
  rec.queries = c.queries;
  rec.max_kickouts = s.max_kickouts;
  rec.mean_kickouts = s.placements == 0 ? 0.0
                                        : static_cast<double>(s.total_kickouts) / static_cast<double>(s.placements);
  rec.p99_kickouts = p99(s.kickout_histogram, s.placements);
  rec.kickout_histogram = s.kickout_histogram;
  rec.stash_high_water = s.stash_high_water;
  rec.max_d_writes = c.max_d_writes_per_op;
  rec.max_rebuild_d_writes = c.max_rebuild_d_writes_per_op;
  rec.query_pure = c.query_writes == 0 && c.query_reads_outside_bins == 0;
  rec.phases_clean = c.old_parity_clean_at_boundaries;
  if (!latencies.empty()) {
    std::sort(latencies.begin(), latencies.end());
    const auto idx = static_cast<std::size_t>(std::ceil(0.99 * static_cast<double>(latencies.size()))) - 1;
    rec.p99_op_latency_ns = latencies[std::min(idx, latencies.size() - 1)];
  }
  return rec;
}

void write_cuckoo_csv(std::ostream& out, const std::vector<CuckooRunRecord>& records) {
  out << "n,epsilon,stash,seed,operations,inserts,deletes,queries,max_kickouts,mean_kickouts,"
         "p99_kickouts,stash_high_water,viability_violations,failures,max_d_writes,"
         "max_rebuild_d_writes,query_pure,phases_clean,oracle_equal,p99_op_latency_ns,wall_time_ns\n";
  for (const CuckooRunRecord& r : records) {
    out << r.n << ',' << r.epsilon << ',' << r.stash << ',' << r.seed << ',' << r.operations << ','
        << r.inserts << ',' << r.deletes << ',' << r.queries << ',' << r.max_kickouts << ','
        << std::fixed << std::setprecision(6) << r.mean_kickouts << std::defaultfloat << ','
        << r.p99_kickouts << ',' << r.stash_high_water << ',' << r.viability_violations << ','
        << r.failures << ',' << r.max_d_writes << ',' << r.max_rebuild_d_writes << ','
        << (r.query_pure ? 1 : 0) << ',' << (r.phases_clean ? 1 : 0) << ',';
    if (r.oracle_equal) out << (*r.oracle_equal ? 1 : 0);
    out << ',' << r.p99_op_latency_ns << ',' << r.wall_time_ns << '\n';
  }
}

void write_cuckoo_json(std::ostream& out, const std::vector<CuckooRunRecord>& records) {
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (const CuckooRunRecord& r : records) {
    nlohmann::ordered_json hist = nlohmann::ordered_json::object();
    for (const auto& [kicks, count] : r.kickout_histogram) hist[std::to_string(kicks)] = count;
    nlohmann::ordered_json row = {{"n", r.n},
                                  {"epsilon", r.epsilon},
                                  {"stash", r.stash},
                                  {"seed", r.seed},
                                  {"operations", r.operations},
                                  {"inserts", r.inserts},
                                  {"deletes", r.deletes},
                                  {"queries", r.queries},
                                  {"max_kickouts", r.max_kickouts},
                                  {"mean_kickouts", r.mean_kickouts},
                                  {"p99_kickouts", r.p99_kickouts},
                                  {"stash_high_water", r.stash_high_water},
                                  {"viability_violations", r.viability_violations},
                                  {"failures", r.failures},
                                  {"max_d_writes", r.max_d_writes},
                                  {"max_rebuild_d_writes", r.max_rebuild_d_writes},
                                  {"query_pure", r.query_pure},
                                  {"phases_clean", r.phases_clean},
                                  {"oracle_equal", nullptr},
                                  {"p99_op_latency_ns", r.p99_op_latency_ns},
                                  {"wall_time_ns", r.wall_time_ns},
                                  {"kickout_histogram", hist}};
    if (r.oracle_equal) row["oracle_equal"] = *r.oracle_equal;
    if (!r.error.empty()) row["error"] = r.error;
    rows.push_back(std::move(row));
  }
  out << rows.dump(2) << '\n';
}

std::vector<WalkTailRow> walk_tail_experiment(const std::vector<std::size_t>& sizes,
                                              std::size_t walks_per_size, std::uint64_t seed) {
  std::vector<WalkTailRow> rows;
  for (std::size_t m : sizes) {
    WalkTailRow row;
    row.m = m;
    AlgoConfig config;
    config.variant = Variant::DancingWalkRank;
    config.n = m;
    config.seed = seed + m;
    Orienter orienter(config);
    for (const Edge& e : generate_workload({WorkloadKind::UniformAttachment, m, seed + m, {}})) {
      orienter.insert(e.first, e.second);
    }
    // Walks start where an insertion would need one: at full vertices.
    OrientedForest forest = orienter.forest();
    std::vector<VertexId> full;
    for (VertexId v = 0; v < m; ++v) {
      if (forest.primary_out_degree(v) == forest.capacity()) full.push_back(v);
    }
    if (full.empty()) {
      rows.push_back(row);
      continue;
    }
    const double limit = 4.0 * std::log2(static_cast<double>(m));
    Rng rng(seed ^ (m * 0x9e3779b97f4a7c15ULL));
    WalkOutcome walk;
    for (std::size_t i = 0; i < walks_per_size; ++i) {
      const VertexId source = full[uniform_below(rng, static_cast<std::uint32_t>(full.size()))];
      forest.random_walk(source, static_cast<std::uint32_t>(m), rng, walk);
      ++row.walks;
      if (static_cast<double>(walk.path.size()) > limit) ++row.long_walks;
    }
    rows.push_back(row);
  }
  return rows;
}

}  // namespace dancewalk::harness
