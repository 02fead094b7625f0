#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <unordered_map>
#include <utility>
#include <vector>

#include "dancewalk/algorithms.hpp"
#include "dancewalk/common.hpp"
#include "dancewalk/oriented_forest.hpp"
#include "dancewalk/rank_forest.hpp"

namespace dancewalk {

using Key = std::uint64_t;
using Value = std::uint64_t;

struct BinPair {
  VertexId first;
  VertexId second;
};

// Maps each key to its two candidate bins. Must be a pure function of the key
// for the provider's lifetime; the two bins may coincide.
class HashPairProvider {
 public:
  virtual ~HashPairProvider() = default;
  virtual BinPair bins(Key key) const = 0;
  virtual std::size_t bin_count() const = 0;
};

// Two seeded 64-bit mixers reduced to [0, n).
std::shared_ptr<const HashPairProvider> seeded_provider(std::uint64_t seed, std::size_t n);
// Simple tabulation: eight 256-entry tables per hash, XOR-combined per key byte.
std::shared_ptr<const HashPairProvider> tabulation_provider(std::uint64_t seed, std::size_t n);
// Fixed pairs for listed keys, falling back to a seeded provider otherwise.
std::shared_ptr<const HashPairProvider> explicit_provider(std::unordered_map<Key, BinPair> pairs,
                                                          std::size_t n,
                                                          std::uint64_t fallback_seed = 0);

struct Record {
  Key key = 0;
  Value value = 0;
};

struct Slot {
  Record record;
  bool occupied = false;
};

inline constexpr std::size_t kSlotsPerBin = 8;
inline constexpr std::size_t kSlotsPerHalf = 4;
// Within a parity half: positions 0-1 primary, 2 secondary, 3 bad.
inline constexpr std::size_t kSecondaryPos = 2;
inline constexpr std::size_t kBadPos = 3;

struct TableConfig {
  std::size_t n = 0;
  double epsilon = 0.5;
  std::size_t stash = 0;
  // Walk constants and rng seed; k must stay 2 so that a half is 4 slots.
  AlgoConfig algo;
};

struct OperationOutcome {
  std::uint32_t kickouts = 0;  // records moved between bins by the walk
  std::uint32_t walk_attempts = 0;
  bool stashed = false;
  bool updated = false;  // insert hit an existing key
  bool found = false;    // delete removed a record
  std::uint32_t rebuild_moves = 0;
  std::uint64_t d_writes = 0;          // auxiliary writes by the operation itself
  std::uint64_t rebuild_d_writes = 0;  // auxiliary writes by its share of rebuild work
};

// Record-count limit of the stash would be exceeded: the operation history is
// not viable with the configured stash size.
class ViabilityViolation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Reads performed by one query, for purity instrumentation.
struct QueryProbe {
  std::uint32_t bins_read = 0;
  std::uint32_t slots_read = 0;
  std::uint32_t stash_entries_read = 0;
};

struct TableStats {
  std::uint64_t operations = 0;
  std::uint64_t inserts = 0;
  std::uint64_t deletes = 0;
  std::uint64_t placements = 0;  // new records placed by script inserts
  std::map<std::uint32_t, std::uint64_t> kickout_histogram;
  std::uint64_t total_kickouts = 0;
  std::uint32_t max_kickouts = 0;
  std::size_t stash_high_water = 0;
  std::uint64_t rebuild_moves = 0;
  std::uint64_t max_d_writes_per_op = 0;
  std::uint64_t max_rebuild_d_writes_per_op = 0;
  std::uint64_t d_writes = 0;
  std::uint64_t phases_completed = 0;
  std::uint64_t walk_attempts = 0;
};

// 8-associative cuckoo table driven by rank-based dancing walks.
//
// Every bin has two 4-slot halves, one per parity. Each parity owns an
// oriented forest over the bins (records are edges between their two bins,
// oriented out of the bin that stores them) and a rank forest. Operations are
// grouped into phases of ceil(epsilon * n) inserts/deletes; every phase flips
// the active parity and, one batch of ceil(1 / epsilon) bins per operation,
// moves the records of the old parity into the new one.
class CuckooTable {
 public:
  using PhaseObserver = std::function<void(const CuckooTable&)>;

  CuckooTable(const TableConfig& config, std::shared_ptr<const HashPairProvider> provider);

  std::optional<Value> query(Key key) const;
  std::optional<Value> query(Key key, QueryProbe& probe) const;

  OperationOutcome insert(Key key, Value value);
  OperationOutcome erase(Key key);

  const TableConfig& config() const { return config_; }
  std::size_t bin_count() const { return n_; }
  std::size_t size() const { return size_; }
  const Slot& slot(std::size_t bin, std::size_t pos) const { return bins_[bin * kSlotsPerBin + pos]; }
  std::span<const Record> stash() const { return stash_; }
  const HashPairProvider& provider() const { return *provider_; }

  int active_parity() const { return active_; }
  std::uint64_t phase_index() const { return phase_; }
  std::size_t phase_length() const { return phase_len_; }
  std::size_t bins_per_op() const { return bins_per_op_; }
  std::uint32_t walk_cap() const { return walk_len_; }
  std::uint32_t attempts() const { return attempts_; }

  // Number of records in the inactive parity's halves.
  std::size_t old_parity_records() const;
  std::size_t parity_records(int parity) const;

  const OrientedForest& orientation(int parity) const { return forests_[parity]; }
  const RankForest& ranks(int parity) const { return ranks_[parity]; }
  // Total auxiliary-structure writes so far (rank links and nodes, edge
  // metadata, volunteer stamps, epoch resets).
  std::uint64_t d_write_counter() const;

  const TableStats& stats() const { return stats_; }

  // Called at each phase boundary just before the parity toggles.
  void set_phase_observer(PhaseObserver observer) { phase_observer_ = std::move(observer); }

 private:
  struct Location {
    enum class Kind : std::uint8_t { Bin, Stash } kind = Kind::Bin;
    std::size_t bin = 0;
    std::size_t pos = 0;  // slot index within the bin, or stash index
  };
  struct Placement {
    std::uint32_t kickouts = 0;
    std::uint32_t walk_attempts = 0;
    bool stashed = false;
  };

  template <typename Probe>
  std::optional<Location> locate(Key key, Probe&& probe) const;

  std::uint32_t advance_phase_work();
  void begin_phase();
  std::uint32_t rebuild_until(std::size_t end_bin);
  Placement place(const Record& record, int parity);
  void evict_from_bin(std::size_t bin, std::size_t pos);
  EdgeId edge_at(std::size_t bin, std::size_t pos) const;
  void push_stash(const Record& record);

  // Slot contents of vertex halves before a forest mutation, keyed by edge.
  void capture_half(VertexId v, int parity);
  void rewrite_half(VertexId v, int parity);
  const Record* captured(EdgeId id) const;

  Slot& slot_ref(std::size_t bin, std::size_t pos) { return bins_[bin * kSlotsPerBin + pos]; }

  TableConfig config_;
  std::shared_ptr<const HashPairProvider> provider_;
  std::size_t n_;
  std::vector<Slot> bins_;
  std::vector<Record> stash_;
  std::array<OrientedForest, 2> forests_;
  std::array<RankForest, 2> ranks_;
  Rng rng_;
  std::uint32_t walk_len_;
  std::uint32_t attempts_;
  std::size_t phase_len_;
  std::size_t bins_per_op_;
  int active_ = 0;
  std::uint64_t phase_ = 0;
  std::uint64_t ops_ = 0;
  std::size_t rebuild_cursor_ = 0;  // bins below it hold no old-parity records
  std::uint64_t placements_ = 0;
  std::size_t size_ = 0;
  TableStats stats_;
  PhaseObserver phase_observer_;

  std::vector<std::pair<EdgeId, Record>> captured_;
};

}  // namespace dancewalk
