// Experiment driver for the orientation algorithms and the cuckoo table.
//
//   dancewalk orient-bench --algo dancing-rank --workload path --n 65536 --reps 50
//   dancewalk cuckoo-bench --n 16384 --epsilon 0.5 --stash 4 --oracle
//   dancewalk scaling --n 4096,16384,65536 --reps 20
//   dancewalk verify --script ops.txt --n 16384 --epsilon 0.5 --stash 0
//
// Exit status is 0 for clean runs and 2 when any trial failed or violated an
// invariant.

#include <fstream>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "dancewalk/harness.hpp"
#include "dancewalk/oracle.hpp"

namespace {

using namespace dancewalk;

constexpr int kExitViolation = 2;

struct CommonFlags {
  std::string algo = "dancing-rank";
  std::size_t n = 1 << 16;
  std::uint32_t k = 2;
  double c = 4.0;
  double d = 4.0;
  std::uint64_t seed = 1;
  std::size_t reps = 1;
  std::string workload = "random-recursive-tree";
  std::string out;
  std::string format = "csv";
  bool oracle = false;
  std::size_t threads = 1;
};

void add_algo_flags(CLI::App* cmd, CommonFlags& f) {
  cmd->add_option("--algo", f.algo, "never-flip | flip-all | dancing-size | dancing-rank")
      ->capture_default_str();
  cmd->add_option("--k", f.k, "primary out-edges per vertex")->capture_default_str();
  cmd->add_option("--c", f.c, "walk-length constant")->capture_default_str();
  cmd->add_option("--d", f.d, "attempt constant")->capture_default_str();
}

void add_run_flags(CLI::App* cmd, CommonFlags& f) {
  cmd->add_option("--seed", f.seed, "base seed; trial r uses seed + r")->capture_default_str();
  cmd->add_option("--reps", f.reps, "number of trials")->capture_default_str();
  cmd->add_option("--out", f.out, "write results here instead of stdout");
  cmd->add_option("--format", f.format, "csv | json")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
  cmd->add_option("--threads", f.threads, "parallel trials")->capture_default_str();
}

AlgoConfig algo_config(const CommonFlags& f) {
  const auto variant = parse_variant(f.algo);
  if (!variant) throw CLI::ValidationError("--algo", "unknown algorithm '" + f.algo + "'");
  AlgoConfig config;
  config.variant = *variant;
  config.k = f.k;
  config.c = f.c;
  config.d = f.d;
  config.seed = f.seed;
  config.n = f.n;
  return config;
}

harness::WorkloadSpec workload_spec(const CommonFlags& f) {
  harness::WorkloadSpec spec;
  spec.n = f.n;
  spec.seed = f.seed;
  const std::string prefix = "file:";
  if (f.workload.rfind(prefix, 0) == 0) {
    spec.kind = harness::WorkloadKind::File;
    spec.path = f.workload.substr(prefix.size());
    return spec;
  }
  const auto kind = harness::parse_workload(f.workload);
  if (!kind || *kind == harness::WorkloadKind::File) {
    throw CLI::ValidationError("--workload", "unknown workload '" + f.workload + "'");
  }
  spec.kind = *kind;
  return spec;
}

class Output {
 public:
  explicit Output(const std::string& path) {
    if (!path.empty()) {
      file_ = std::make_unique<std::ofstream>(path);
      if (!*file_) throw std::runtime_error("cannot open " + path);
    }
  }
  std::ostream& stream() { return file_ ? *file_ : std::cout; }

 private:
  std::unique_ptr<std::ofstream> file_;
};

int orient_bench(const CommonFlags& f) {
  const auto trials = harness::run_orient(workload_spec(f), algo_config(f),
                                          {f.reps, f.oracle ? std::size_t{16} : 0, f.threads});
  std::vector<harness::RunRecord> records;
  bool clean = true;
  for (const auto& t : trials) {
    records.push_back(t.record);
    if (t.record.failures > 0) clean = false;
    if (!t.orientation_ok) {
      clean = false;
      std::cerr << "seed " << t.record.seed << ": " << t.violation << '\n';
    }
  }
  Output out(f.out);
  if (f.format == "json") {
    harness::write_json(out.stream(), records);
  } else {
    harness::write_csv(out.stream(), records);
  }
  return clean ? 0 : kExitViolation;
}

struct CuckooFlags {
  double epsilon = 0.5;
  std::size_t stash = 0;
  std::string script;
  double load = 0.2;
  std::size_t ops = 100000;
  std::string provider = "seeded";
};

int cuckoo_bench(const CommonFlags& f, const CuckooFlags& cf) {
  std::vector<harness::CuckooRunRecord> records;
  bool clean = true;
  Script from_file;
  if (!cf.script.empty()) from_file = load_script(cf.script);
  for (std::size_t r = 0; r < f.reps; ++r) {
    const std::uint64_t seed = f.seed + r;
    const Script script =
        cf.script.empty() ? generate_script({f.n, cf.load, cf.ops, 4, seed}) : from_file;
    TableConfig config;
    config.n = f.n;
    config.epsilon = cf.epsilon;
    config.stash = cf.stash;
    config.algo.c = f.c;
    config.algo.d = f.d;
    config.algo.seed = seed;
    harness::CuckooOptions options;
    options.oracle = f.oracle;
    options.provider =
        cf.provider == "tabulation" ? harness::ProviderKind::Tabulation : harness::ProviderKind::Seeded;
    auto rec = harness::run_cuckoo(script, config, seed, options);
    if (!rec.error.empty() || !rec.query_pure || !rec.phases_clean) {
      clean = false;
      if (!rec.error.empty()) std::cerr << "seed " << seed << ": " << rec.error << '\n';
    }
    records.push_back(std::move(rec));
  }
  Output out(f.out);
  if (f.format == "json") {
    harness::write_cuckoo_json(out.stream(), records);
  } else {
    harness::write_cuckoo_csv(out.stream(), records);
  }
  return clean ? 0 : kExitViolation;
}

int scaling(const CommonFlags& f, const std::vector<std::size_t>& sizes) {
  const auto spec = workload_spec(f);
  const auto rows = harness::scaling_report(sizes, algo_config(f), spec.kind, f.seed, f.reps, f.threads);
  Output out(f.out);
  harness::write_scaling(out.stream(), rows);
  for (const auto& row : rows) {
    if (row.failures > 0) return kExitViolation;
  }
  return 0;
}

int verify(const CommonFlags& f, const CuckooFlags& cf) {
  bool clean = true;
  std::ostream& out = std::cout;
  if (!cf.script.empty()) {
    const Script script = load_script(cf.script);
    const auto provider = harness::make_provider(
        cf.provider == "tabulation" ? harness::ProviderKind::Tabulation : harness::ProviderKind::Seeded,
        f.seed, f.n);
    const auto verdict = oracle::check_epsilon_viability(script, f.n, cf.epsilon, *provider);
    out << "windows: " << verdict.windows.size() << ", max stash needed: " << verdict.max_stash_needed
        << ", stash allowed: " << cf.stash << '\n';
    for (const auto& w : verdict.windows) {
      if (!w.verdict.viable) {
        out << "  window " << w.window << " (ops " << w.first_op << ".." << w.last_op << ", "
            << w.placements << " placements) needs stash " << w.verdict.min_stash_needed << '\n';
      }
    }
    if (!verdict.viable_with(cf.stash)) {
      out << "script is not viable with stash " << cf.stash << '\n';
      clean = false;
    }
    TableConfig config;
    config.n = f.n;
    config.epsilon = cf.epsilon;
    config.stash = cf.stash;
    config.algo.c = f.c;
    config.algo.d = f.d;
    config.algo.seed = f.seed;
    CuckooTable table(config, provider);
    const auto eq = oracle::replay_with_oracle(script, table);
    if (eq.equal) {
      out << "replay: equivalent to reference over " << script.size() << " operations ("
          << eq.queries_compared << " queries)\n";
    } else {
      out << "replay: " << eq.message << '\n';
      clean = false;
    }
  } else {
    const auto trials = harness::run_orient(workload_spec(f), algo_config(f), {f.reps, 16, f.threads});
    for (const auto& t : trials) {
      out << "seed " << t.record.seed << ": " << t.insertions << " insertions, max out-degree "
          << t.record.max_out_degree << ", max flips " << t.record.max_flips << ", failures "
          << t.record.failures << ", orientation " << (t.orientation_ok ? "ok" : t.violation) << '\n';
      if (!t.orientation_ok || t.record.failures > 0) clean = false;
    }
  }
  out << (clean ? "PASS" : "FAIL") << '\n';
  return clean ? 0 : kExitViolation;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Incremental forest orientation and dancing-kickout cuckoo hashing experiments"};
  app.require_subcommand(1);

  CommonFlags f;
  CuckooFlags cf;
  std::vector<std::size_t> sizes{1 << 12, 1 << 14, 1 << 16, 1 << 18};

  auto* orient = app.add_subcommand("orient-bench", "run an orientation algorithm over a workload");
  add_algo_flags(orient, f);
  add_run_flags(orient, f);
  orient->add_option("--n", f.n, "vertex count")->capture_default_str();
  orient->add_option("--workload", f.workload, "workload kind, or file:<path> for an edge list")
      ->capture_default_str();
  orient->add_flag("--oracle", f.oracle, "sweep orientation invariants at 16 checkpoints and at the end");

  auto* cuckoo = app.add_subcommand("cuckoo-bench", "replay operation scripts through the cuckoo table");
  add_run_flags(cuckoo, f);
  cuckoo->add_option("--n", f.n, "bin count")->capture_default_str();
  cuckoo->add_option("--c", f.c, "walk-length constant")->capture_default_str();
  cuckoo->add_option("--d", f.d, "attempt constant")->capture_default_str();
  cuckoo->add_option("--epsilon", cf.epsilon, "phase length as a fraction of n")->capture_default_str();
  cuckoo->add_option("--stash", cf.stash, "stash capacity")->capture_default_str();
  cuckoo->add_option("--script", cf.script, "operation script; generated when omitted");
  cuckoo->add_option("--load", cf.load, "steady-state load of generated scripts")->capture_default_str();
  cuckoo->add_option("--ops", cf.ops, "insert/delete count of generated scripts")->capture_default_str();
  cuckoo->add_option("--provider", cf.provider, "seeded | tabulation")
      ->check(CLI::IsMember({"seeded", "tabulation"}))
      ->capture_default_str();
  cuckoo->add_flag("--oracle", f.oracle, "cross-check every query against a reference map");

  auto* scale = app.add_subcommand("scaling", "mean walk steps and flips per insertion across sizes");
  add_algo_flags(scale, f);
  add_run_flags(scale, f);
  scale->add_option("--n", sizes, "vertex counts")->delimiter(',')->capture_default_str();
  scale->add_option("--workload", f.workload, "workload kind")->capture_default_str();

  auto* check = app.add_subcommand("verify", "check a script or a workload against the oracles");
  add_algo_flags(check, f);
  add_run_flags(check, f);
  check->add_option("--n", f.n, "vertex or bin count")->capture_default_str();
  check->add_option("--workload", f.workload, "workload kind, or file:<path>")->capture_default_str();
  check->add_option("--script", cf.script, "operation script to check for viability and replay");
  check->add_option("--epsilon", cf.epsilon, "phase length as a fraction of n")->capture_default_str();
  check->add_option("--stash", cf.stash, "stash capacity")->capture_default_str();
  check->add_option("--provider", cf.provider, "seeded | tabulation")
      ->check(CLI::IsMember({"seeded", "tabulation"}))
      ->capture_default_str();
  check->add_flag("--oracle", f.oracle, "accepted for symmetry; verify always uses the oracles");

  auto* gen = app.add_subcommand("gen-script", "write a generated operation script");
  std::string gen_out;
  gen->add_option("--n", f.n, "bin count")->capture_default_str();
  gen->add_option("--seed", f.seed, "seed")->capture_default_str();
  gen->add_option("--load", cf.load, "steady-state load")->capture_default_str();
  gen->add_option("--ops", cf.ops, "insert/delete count")->capture_default_str();
  gen->add_option("--out", gen_out, "output path")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (orient->parsed()) return orient_bench(f);
    if (cuckoo->parsed()) return cuckoo_bench(f, cf);
    if (scale->parsed()) return scaling(f, sizes);
    if (check->parsed()) return verify(f, cf);
    if (gen->parsed()) {
      std::ofstream out(gen_out);
      if (!out) throw std::runtime_error("cannot open " + gen_out);
      write_script(out, generate_script({f.n, cf.load, cf.ops, 4, f.seed}));
      return 0;
    }
  } catch (const CLI::Error& e) {
    return app.exit(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
