#include "dancewalk/cuckoo.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace dancewalk {

namespace {

constexpr double kCeilSlack = 1e-9;

struct NoProbe {
  void bin() const {}
  void slot() const {}
  void stash_entry() const {}
};

struct CountingProbe {
  QueryProbe& probe;
  void bin() const { ++probe.bins_read; }
  void slot() const { ++probe.slots_read; }
  void stash_entry() const { ++probe.stash_entries_read; }
};

std::size_t half_base(int parity) { return static_cast<std::size_t>(parity) * kSlotsPerHalf; }

}  // namespace

CuckooTable::CuckooTable(const TableConfig& config, std::shared_ptr<const HashPairProvider> provider)
    : config_(config),
      provider_(std::move(provider)),
      n_(config.n),
      forests_{OrientedForest(std::max<std::size_t>(config.n, 1), 2),
               OrientedForest(std::max<std::size_t>(config.n, 1), 2)},
      ranks_{RankForest(std::max<std::size_t>(config.n, 1)),
             RankForest(std::max<std::size_t>(config.n, 1))},
      rng_(config.algo.seed),
      walk_len_(walk_length(config.n, 2, config.algo.c)),
      attempts_(attempt_cap(config.n, config.algo.d)) {
  if (config.n < 4) throw ConfigError("cuckoo table needs at least 4 bins");
  if (!(config.epsilon > 0.0) || config.epsilon > 1.0) {
    throw ConfigError("phase fraction epsilon must lie in (0, 1]");
  }
  if (config.algo.k != 2) throw ConfigError("cuckoo table requires primary capacity k = 2");
  if (!(config.algo.c > 0) || !(config.algo.d > 0)) {
    throw ConfigError("constants c and d must be positive");
  }
  if (!provider_) throw ConfigError("cuckoo table needs a hash-pair provider");
  if (provider_->bin_count() != config.n) {
    throw ConfigError("hash-pair provider bin count does not match the table");
  }
  bins_.resize(n_ * kSlotsPerBin);
  phase_len_ = std::max<std::size_t>(
      1, static_cast<std::size_t>(std::ceil(config.epsilon * static_cast<double>(n_) - kCeilSlack)));
  bins_per_op_ = std::max<std::size_t>(
      1, static_cast<std::size_t>(std::ceil(1.0 / config.epsilon - kCeilSlack)));
  // Phase 0 starts with an empty old parity.
  rebuild_cursor_ = n_;
}

std::uint64_t CuckooTable::d_write_counter() const {
  return ranks_[0].writes() + ranks_[1].writes() + forests_[0].bookkeeping_writes() +
         forests_[1].bookkeeping_writes();
}

template <typename Probe>
std::optional<CuckooTable::Location> CuckooTable::locate(Key key, Probe&& probe) const {
  const BinPair pair = provider_->bins(key);
  auto scan = [&](std::size_t bin) -> std::optional<Location> {
    probe.bin();
    for (std::size_t pos = 0; pos < kSlotsPerBin; ++pos) {
      probe.slot();
      const Slot& s = bins_[bin * kSlotsPerBin + pos];
      if (s.occupied && s.record.key == key) return Location{Location::Kind::Bin, bin, pos};
    }
    return std::nullopt;
  };
  if (auto hit = scan(pair.first)) return hit;
  if (pair.second != pair.first) {
    if (auto hit = scan(pair.second)) return hit;
  }
  for (std::size_t i = 0; i < stash_.size(); ++i) {
    probe.stash_entry();
    if (stash_[i].key == key) return Location{Location::Kind::Stash, 0, i};
  }
  return std::nullopt;
}

std::optional<Value> CuckooTable::query(Key key) const {
  const auto loc = locate(key, NoProbe{});
  if (!loc) return std::nullopt;
  if (loc->kind == Location::Kind::Stash) return stash_[loc->pos].value;
  return bins_[loc->bin * kSlotsPerBin + loc->pos].record.value;
}

std::optional<Value> CuckooTable::query(Key key, QueryProbe& probe) const {
  const auto loc = locate(key, CountingProbe{probe});
  if (!loc) return std::nullopt;
  if (loc->kind == Location::Kind::Stash) return stash_[loc->pos].value;
  return bins_[loc->bin * kSlotsPerBin + loc->pos].record.value;
}

std::size_t CuckooTable::parity_records(int parity) const {
  std::size_t count = 0;
  for (std::size_t b = 0; b < n_; ++b) {
    for (std::size_t i = 0; i < kSlotsPerHalf; ++i) {
      count += slot(b, half_base(parity) + i).occupied ? 1 : 0;
    }
  }
  return count;
}

std::size_t CuckooTable::old_parity_records() const { return parity_records(active_ ^ 1); }

EdgeId CuckooTable::edge_at(std::size_t bin, std::size_t pos) const {
  const int parity = static_cast<int>(pos / kSlotsPerHalf);
  const std::size_t local = pos % kSlotsPerHalf;
  const OrientedForest& f = forests_[parity];
  const auto v = static_cast<VertexId>(bin);
  if (local < kSecondaryPos) {
    auto row = f.primary_out(v);
    if (local >= row.size()) throw StructuralError("bin slot and orientation disagree");
    return row[local];
  }
  return local == kSecondaryPos ? f.secondary_out(v) : f.bad_out(v);
}

void CuckooTable::capture_half(VertexId v, int parity) {
  for (std::size_t i = 0; i < kSlotsPerHalf; ++i) {
    const std::size_t pos = half_base(parity) + i;
    const Slot& s = slot(v, pos);
    if (s.occupied) captured_.emplace_back(edge_at(v, pos), s.record);
  }
}

const Record* CuckooTable::captured(EdgeId id) const {
  for (const auto& [edge, record] : captured_) {
    if (edge == id) return &record;
  }
  return nullptr;
}

void CuckooTable::rewrite_half(VertexId v, int parity) {
  const OrientedForest& f = forests_[parity];
  auto fill = [&](std::size_t local, EdgeId id) {
    Slot& s = slot_ref(v, half_base(parity) + local);
    if (id == kNoEdge) {
      s = Slot{};
      return;
    }
    const Record* r = captured(id);
    if (r == nullptr) throw StructuralError("record for moved edge was not captured");
    s = Slot{*r, true};
  };
  auto row = f.primary_out(v);
  for (std::size_t j = 0; j < kSecondaryPos; ++j) fill(j, j < row.size() ? row[j] : kNoEdge);
  fill(kSecondaryPos, f.secondary_out(v));
  fill(kBadPos, f.bad_out(v));
}

void CuckooTable::push_stash(const Record& record) {
  if (stash_.size() >= config_.stash) {
    throw ViabilityViolation("stash capacity " + std::to_string(config_.stash) +
                             " exceeded by key " + std::to_string(record.key));
  }
  stash_.push_back(record);
  stats_.stash_high_water = std::max(stats_.stash_high_water, stash_.size());
}

CuckooTable::Placement CuckooTable::place(const Record& record, int parity) {
  const BinPair pair = provider_->bins(record.key);
  if (pair.first >= n_ || pair.second >= n_) throw StructuralError("provider returned a bin out of range");
  OrientedForest& f = forests_[parity];

  auto place_bad = [&](VertexId owner, VertexId other) {
    f.install_edge(owner, other, owner, EdgeClass::Bad);
    slot_ref(owner, half_base(parity) + kBadPos) = Slot{record, true};
    return Placement{0, 0, false};
  };
  auto place_cycle_edge = [&]() {
    if (f.bad_out(pair.first) == kNoEdge) return place_bad(pair.first, pair.second);
    if (f.bad_out(pair.second) == kNoEdge) return place_bad(pair.second, pair.first);
    push_stash(record);
    return Placement{0, 0, true};
  };

  if (pair.first == pair.second) return place_cycle_edge();

  const CombinePlan rank_plan = ranks_[parity].plan(pair.first, pair.second);
  if (rank_plan.outcome.verdict == CombineVerdict::SameTree) return place_cycle_edge();

  const bool first = rank_plan.outcome.verdict == CombineVerdict::FirstSmaller;
  const VertexId source = first ? pair.first : pair.second;
  const VertexId other = first ? pair.second : pair.first;

  const WalkPlan walk = plan_walk(f, source, walk_len_, attempts_, rng_, placements_++);

  captured_.clear();
  capture_half(source, parity);
  VertexId at = source;
  for (EdgeId id : walk.walk.path) {
    at = f.edge(id).other(at);
    capture_half(at, parity);
  }
  const EdgeId fresh = commit_walk(f, walk, source, other);
  captured_.emplace_back(fresh, record);
  ranks_[parity].apply(rank_plan);

  rewrite_half(source, parity);
  at = source;
  for (EdgeId id : walk.walk.path) {
    at = f.edge(id).other(at);
    rewrite_half(at, parity);
  }
  return Placement{static_cast<std::uint32_t>(walk.walk.path.size()), walk.attempts, false};
}

void CuckooTable::evict_from_bin(std::size_t bin, std::size_t pos) {
  const int parity = static_cast<int>(pos / kSlotsPerHalf);
  const auto v = static_cast<VertexId>(bin);
  captured_.clear();
  capture_half(v, parity);
  forests_[parity].remove_edge(edge_at(bin, pos));
  rewrite_half(v, parity);
}

std::uint32_t CuckooTable::rebuild_until(std::size_t end_bin) {
  std::uint32_t moves = 0;
  const int old = active_ ^ 1;
  end_bin = std::min(end_bin, n_);
  while (rebuild_cursor_ < end_bin) {
    const std::size_t bin = rebuild_cursor_;
    for (std::size_t i = 0; i < kSlotsPerHalf;) {
      const std::size_t pos = half_base(old) + i;
      if (!slot(bin, pos).occupied) {
        ++i;
        continue;
      }
      // Place first: if that throws, the record is still readable where it was.
      const Record record = slot(bin, pos).record;
      place(record, active_);
      evict_from_bin(bin, pos);
      ++moves;
      i = 0;
    }
    ++rebuild_cursor_;
  }
  return moves;
}

void CuckooTable::begin_phase() {
  if (phase_observer_) phase_observer_(*this);
  ++phase_;
  ++stats_.phases_completed;
  active_ ^= 1;
  rebuild_cursor_ = 0;
  if (forests_[active_].alive_edges() != 0) {
    throw StructuralError("new active parity still holds records from two phases ago");
  }
  ranks_[active_].reset();
  forests_[active_].begin_phase();
}

std::uint32_t CuckooTable::advance_phase_work() {
  const std::uint64_t t = ops_++;
  std::uint32_t moves = 0;
  const std::size_t j = static_cast<std::size_t>(t % phase_len_);
  if (t > 0 && j == 0) {
    // Finish any batch an earlier failure left behind before toggling.
    moves += rebuild_until(n_);
    begin_phase();
    std::vector<Record> pending;
    pending.swap(stash_);
    for (std::size_t i = 0; i < pending.size(); ++i) {
      try {
        place(pending[i], active_);
      } catch (...) {
        stash_.insert(stash_.end(), pending.begin() + static_cast<std::ptrdiff_t>(i), pending.end());
        throw;
      }
      ++moves;
    }
  }
  moves += rebuild_until((j + 1) * bins_per_op_);
  stats_.rebuild_moves += moves;
  return moves;
}

OperationOutcome CuckooTable::insert(Key key, Value value) {
  OperationOutcome out;
  const std::uint64_t before = d_write_counter();
  ++stats_.operations;
  ++stats_.inserts;
  out.rebuild_moves = advance_phase_work();
  const std::uint64_t mid = d_write_counter();

  if (const auto loc = locate(key, NoProbe{})) {
    if (loc->kind == Location::Kind::Stash) {
      stash_[loc->pos].value = value;
    } else {
      slot_ref(loc->bin, loc->pos).record.value = value;
    }
    out.updated = true;
  } else {
    const Placement p = place(Record{key, value}, active_);
    ++size_;
    out.kickouts = p.kickouts;
    out.walk_attempts = p.walk_attempts;
    out.stashed = p.stashed;
    ++stats_.placements;
    ++stats_.kickout_histogram[p.kickouts];
    stats_.total_kickouts += p.kickouts;
    stats_.max_kickouts = std::max(stats_.max_kickouts, p.kickouts);
    stats_.walk_attempts += p.walk_attempts;
  }

  const std::uint64_t after = d_write_counter();
  out.rebuild_d_writes = mid - before;
  out.d_writes = after - mid;
  stats_.d_writes += after - before;
  stats_.max_d_writes_per_op = std::max(stats_.max_d_writes_per_op, out.d_writes);
  stats_.max_rebuild_d_writes_per_op = std::max(stats_.max_rebuild_d_writes_per_op, out.rebuild_d_writes);
  return out;
}

OperationOutcome CuckooTable::erase(Key key) {
  OperationOutcome out;
  const std::uint64_t before = d_write_counter();
  ++stats_.operations;
  ++stats_.deletes;
  out.rebuild_moves = advance_phase_work();
  const std::uint64_t mid = d_write_counter();

  if (const auto loc = locate(key, NoProbe{})) {
    if (loc->kind == Location::Kind::Stash) {
      stash_.erase(stash_.begin() + static_cast<std::ptrdiff_t>(loc->pos));
    } else {
      evict_from_bin(loc->bin, loc->pos);
    }
    --size_;
    out.found = true;
  }

  const std::uint64_t after = d_write_counter();
  out.rebuild_d_writes = mid - before;
  out.d_writes = after - mid;
  stats_.d_writes += after - before;
  stats_.max_d_writes_per_op = std::max(stats_.max_d_writes_per_op, out.d_writes);
  stats_.max_rebuild_d_writes_per_op = std::max(stats_.max_rebuild_d_writes_per_op, out.rebuild_d_writes);
  return out;
}

}  // namespace dancewalk
