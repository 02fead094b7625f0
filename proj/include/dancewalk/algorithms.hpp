#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include "dancewalk/common.hpp"
#include "dancewalk/oriented_forest.hpp"
#include "dancewalk/rank_forest.hpp"

namespace dancewalk {

enum class Variant : std::uint8_t { NeverFlip, FlipAll, DancingWalkSize, DancingWalkRank };

std::string_view to_string(Variant v);
std::optional<Variant> parse_variant(std::string_view name);

struct AlgoConfig {
  Variant variant = Variant::DancingWalkRank;
  std::uint32_t k = 2;
  double c = 4.0;
  double d = 4.0;
  std::uint64_t seed = 0;
  std::size_t n = 0;
};

// Walk length cap: max(1, ceil(c * log_k(log2 n))).
std::uint32_t walk_length(std::size_t n, std::uint32_t k, double c);
// Attempts per insertion before declaring failure: max(1, ceil(d * log2 n)).
std::uint32_t attempt_cap(std::size_t n, double d);

struct InsertReport {
  VertexId source = kNoVertex;
  std::uint32_t flips = 0;
  std::uint32_t walk_attempts = 0;
  std::uint64_t walk_steps = 0;
  bool early_exit = false;
  bool volunteer_used = false;
};

// Every random-walk attempt of one insertion failed. Nothing was installed.
class FailureError : public std::runtime_error {
 public:
  FailureError(std::uint64_t insertion_index, std::uint32_t attempts);

  std::uint64_t insertion_index() const { return insertion_index_; }
  std::uint32_t attempts() const { return attempts_; }

 private:
  std::uint64_t insertion_index_;
  std::uint32_t attempts_;
};

// An accepted augmenting walk, found but not yet applied.
struct WalkPlan {
  bool early_exit = false;
  EdgeClass terminal_slot = EdgeClass::Primary;
  WalkOutcome walk;
  std::uint32_t attempts = 0;
  std::uint64_t steps = 0;
};

using WalkObserver = std::function<void(VertexId source, const WalkOutcome&)>;

// Searches for a walk from `source` that frees one of its primary slots.
// Walks ending below capacity are accepted outright; full-length walks are
// accepted when the terminal can still volunteer. Throws FailureError after
// `attempts` rejected walks. Does not change any slot.
WalkPlan plan_walk(OrientedForest& forest, VertexId source, std::uint32_t max_len,
                   std::uint32_t attempts, Rng& rng, std::uint64_t insertion_index,
                   const WalkObserver& observer = {});

// Flips the planned walk and installs {source, other} as a primary edge out
// of `source`. Returns the new edge id.
EdgeId commit_walk(OrientedForest& forest, const WalkPlan& plan, VertexId source, VertexId other);

// Incremental forest orientation driver for one variant.
class Orienter {
 public:
  explicit Orienter(const AlgoConfig& config);

  // Inserts edge {u, v}; u and v must lie in different components.
  InsertReport insert(VertexId u, VertexId v);

  const AlgoConfig& config() const { return config_; }
  const OrientedForest& forest() const { return forest_; }
  const RankForest& ranks() const { return ranks_; }
  const SizeForest& sizes() const { return sizes_; }
  std::uint32_t walk_cap() const { return walk_len_; }
  std::uint32_t attempts() const { return attempts_; }
  std::uint64_t insertions() const { return insertions_; }
  std::uint32_t max_out_degree() const { return max_out_degree_; }

  void set_walk_observer(WalkObserver observer) { observer_ = std::move(observer); }

 private:
  InsertReport insert_dancing(VertexId s, VertexId other);
  InsertReport insert_flipall(VertexId s, VertexId other);
  void note_degree(VertexId v);

  AlgoConfig config_;
  OrientedForest forest_;
  RankForest ranks_;
  SizeForest sizes_;
  Rng rng_;
  std::uint32_t walk_len_;
  std::uint32_t attempts_;
  std::uint64_t insertions_ = 0;
  std::uint32_t max_out_degree_ = 0;
  WalkObserver observer_;
  std::vector<EdgeId> scratch_path_;
};

}  // namespace dancewalk
