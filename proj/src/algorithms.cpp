#include "dancewalk/algorithms.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

namespace dancewalk {

namespace {

// Tolerance for ceilings of logarithms that land on integers (log_16 16).
constexpr double kCeilSlack = 1e-9;

std::uint32_t ceil_log2(std::size_t n) {
  return n <= 1 ? 0U : static_cast<std::uint32_t>(std::bit_width(n - 1));
}

std::uint32_t forest_capacity(const AlgoConfig& config) {
  // NeverFlip never moves an edge, so a vertex may collect up to
  // ceil(log2 n) out-edges.
  if (config.variant == Variant::NeverFlip) {
    return std::max(config.k, ceil_log2(config.n) + 1);
  }
  return config.k;
}

}  // namespace

std::string_view to_string(Variant v) {
  switch (v) {
    case Variant::NeverFlip: return "never-flip";
    case Variant::FlipAll: return "flip-all";
    case Variant::DancingWalkSize: return "dancing-size";
    case Variant::DancingWalkRank: return "dancing-rank";
  }
  return "unknown";
}

std::optional<Variant> parse_variant(std::string_view name) {
  for (Variant v : {Variant::NeverFlip, Variant::FlipAll, Variant::DancingWalkSize,
                    Variant::DancingWalkRank}) {
    if (to_string(v) == name) return v;
  }
  return std::nullopt;
}

std::uint32_t walk_length(std::size_t n, std::uint32_t k, double c) {
  if (n < 4 || k < 2) return 1;
  const double loglog = std::log2(std::log2(static_cast<double>(n)));
  const double steps = c * loglog / std::log2(static_cast<double>(k));
  return std::max<std::uint32_t>(1, static_cast<std::uint32_t>(std::ceil(steps - kCeilSlack)));
}

std::uint32_t attempt_cap(std::size_t n, double d) {
  if (n < 2) return 1;
  const double attempts = d * std::log2(static_cast<double>(n));
  return std::max<std::uint32_t>(1, static_cast<std::uint32_t>(std::ceil(attempts - kCeilSlack)));
}

FailureError::FailureError(std::uint64_t insertion_index, std::uint32_t attempts)
    : std::runtime_error("insertion " + std::to_string(insertion_index) + " failed after " +
                         std::to_string(attempts) + " random-walk attempts"),
      insertion_index_(insertion_index),
      attempts_(attempts) {}

WalkPlan plan_walk(OrientedForest& forest, VertexId source, std::uint32_t max_len,
                   std::uint32_t attempts, Rng& rng, std::uint64_t insertion_index,
                   const WalkObserver& observer) {
  WalkPlan plan;
  if (forest.primary_out_degree(source) < forest.capacity()) {
    plan.early_exit = true;
    plan.walk.terminal = source;
    return plan;
  }
  for (std::uint32_t attempt = 1; attempt <= attempts; ++attempt) {
    forest.random_walk(source, max_len, rng, plan.walk);
    plan.attempts = attempt;
    plan.steps += plan.walk.path.size();
    if (observer) observer(source, plan.walk);
    if (plan.walk.reason == WalkOutcome::Reason::LowDegree) {
      plan.terminal_slot = EdgeClass::Primary;
      return plan;
    }
    const VertexId t = plan.walk.terminal;
    if (forest.secondary_out(t) == kNoEdge && !forest.volunteered(t)) {
      plan.terminal_slot = EdgeClass::Secondary;
      return plan;
    }
  }
  throw FailureError(insertion_index, attempts);
}

EdgeId commit_walk(OrientedForest& forest, const WalkPlan& plan, VertexId source, VertexId other) {
  if (!plan.early_exit) forest.flip_path(plan.walk.path, source, plan.terminal_slot);
  return forest.install_edge(source, other, source, EdgeClass::Primary);
}

Orienter::Orienter(const AlgoConfig& config)
    : config_(config),
      forest_(config.n, forest_capacity(config)),
      ranks_(config.n),
      sizes_(config.n),
      rng_(config.seed),
      walk_len_(walk_length(config.n, config.k, config.c)),
      attempts_(attempt_cap(config.n, config.d)) {
  if (config.k < 2) throw ConfigError("primary capacity k must be at least 2");
  if (!(config.c > 0) || !(config.d > 0)) throw ConfigError("constants c and d must be positive");
}

void Orienter::note_degree(VertexId v) {
  max_out_degree_ = std::max(max_out_degree_, forest_.out_degree(v));
}

InsertReport Orienter::insert(VertexId u, VertexId v) {
  if (u == v) throw StructuralError("self-loop is not a forest edge");
  if (u >= config_.n || v >= config_.n) throw StructuralError("edge endpoint out of range");

  if (config_.variant == Variant::DancingWalkRank) {
    const CombinePlan rank_plan = ranks_.plan(u, v);
    if (rank_plan.outcome.verdict == CombineVerdict::SameTree) {
      throw StructuralError("edge endpoints already share a component");
    }
    const bool first = rank_plan.outcome.verdict == CombineVerdict::FirstSmaller;
    InsertReport report = insert_dancing(first ? u : v, first ? v : u);
    ranks_.apply(rank_plan);
    return report;
  }

  const SizeUnion cmp = sizes_.compare(u, v);
  if (cmp.same) throw StructuralError("edge endpoints already share a component");
  const VertexId s = cmp.first_smaller ? u : v;
  const VertexId other = cmp.first_smaller ? v : u;

  InsertReport report;
  switch (config_.variant) {
    case Variant::NeverFlip:
      ++insertions_;
      forest_.install_edge(s, other, s, EdgeClass::Primary);
      report.source = s;
      report.early_exit = true;
      note_degree(s);
      break;
    case Variant::FlipAll:
      report = insert_flipall(s, other);
      break;
    default:
      report = insert_dancing(s, other);
      break;
  }
  sizes_.unite(u, v);
  return report;
}

InsertReport Orienter::insert_dancing(VertexId s, VertexId other) {
  const std::uint64_t index = insertions_++;
  const WalkPlan plan = plan_walk(forest_, s, walk_len_, attempts_, rng_, index, observer_);
  commit_walk(forest_, plan, s, other);

  InsertReport report;
  report.source = s;
  report.early_exit = plan.early_exit;
  report.flips = static_cast<std::uint32_t>(plan.walk.path.size());
  report.walk_attempts = plan.attempts;
  report.walk_steps = plan.steps;
  report.volunteer_used = !plan.early_exit && plan.terminal_slot == EdgeClass::Secondary;
  note_degree(s);
  if (!plan.early_exit) note_degree(plan.walk.terminal);
  return report;
}

InsertReport Orienter::insert_flipall(VertexId s, VertexId other) {
  ++insertions_;
  InsertReport report;
  report.source = s;
  // Out-degree is at most one everywhere, so the directed path out of s is
  // unique. Flip it entirely so s is free before taking the new edge.
  scratch_path_.clear();
  VertexId at = s;
  while (forest_.primary_out_degree(at) > 0) {
    const EdgeId id = forest_.primary_out(at)[0];
    scratch_path_.push_back(id);
    at = forest_.edge(id).other(at);
  }
  report.early_exit = scratch_path_.empty();
  if (!scratch_path_.empty()) forest_.flip_path(scratch_path_, s);
  forest_.install_edge(s, other, s, EdgeClass::Primary);
  report.flips = static_cast<std::uint32_t>(scratch_path_.size());
  note_degree(s);
  note_degree(at);
  return report;
}

}  // namespace dancewalk
