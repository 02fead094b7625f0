#include <array>
#include <random>

#include "dancewalk/cuckoo.hpp"

namespace dancewalk {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

VertexId reduce(std::uint64_t h, std::size_t n) {
  return static_cast<VertexId>(
      (static_cast<unsigned __int128>(h) * static_cast<unsigned __int128>(n)) >> 64);
}

void check_bins(std::size_t n) {
  if (n == 0 || n >= kNoVertex) throw ConfigError("hash provider needs a bin count in [1, 2^32)");
}

class SeededProvider final : public HashPairProvider {
 public:
  SeededProvider(std::uint64_t seed, std::size_t n)
      : n_(n), salt1_(splitmix64(seed)), salt2_(splitmix64(seed ^ 0x5bd1e9955bd1e995ULL)) {
    check_bins(n);
  }

  BinPair bins(Key key) const override {
    return {reduce(splitmix64(key ^ salt1_), n_), reduce(splitmix64(key ^ salt2_), n_)};
  }
  std::size_t bin_count() const override { return n_; }

 private:
  std::size_t n_;
  std::uint64_t salt1_;
  std::uint64_t salt2_;
};

class TabulationProvider final : public HashPairProvider {
 public:
  TabulationProvider(std::uint64_t seed, std::size_t n) : n_(n) {
    check_bins(n);
    std::mt19937_64 gen(seed);
    for (auto& per_hash : tables_)
      for (auto& per_byte : per_hash)
        for (auto& word : per_byte) word = gen();
  }

  BinPair bins(Key key) const override { return {reduce(hash(0, key), n_), reduce(hash(1, key), n_)}; }
  std::size_t bin_count() const override { return n_; }

 private:
  std::uint64_t hash(int which, Key key) const {
    std::uint64_t h = 0;
    for (int byte = 0; byte < 8; ++byte) {
      h ^= tables_[which][byte][(key >> (8 * byte)) & 0xff];
    }
    return h;
  }

  std::size_t n_;
  std::array<std::array<std::array<std::uint64_t, 256>, 8>, 2> tables_{};
};

class ExplicitProvider final : public HashPairProvider {
 public:
  ExplicitProvider(std::unordered_map<Key, BinPair> pairs, std::size_t n, std::uint64_t seed)
      : pairs_(std::move(pairs)), fallback_(seed, n) {
    for (const auto& [key, pair] : pairs_) {
      if (pair.first >= n || pair.second >= n) throw ConfigError("explicit bin pair out of range");
    }
  }

  BinPair bins(Key key) const override {
    auto it = pairs_.find(key);
    return it != pairs_.end() ? it->second : fallback_.bins(key);
  }
  std::size_t bin_count() const override { return fallback_.bin_count(); }

 private:
  std::unordered_map<Key, BinPair> pairs_;
  SeededProvider fallback_;
};

}  // namespace

std::shared_ptr<const HashPairProvider> seeded_provider(std::uint64_t seed, std::size_t n) {
  return std::make_shared<SeededProvider>(seed, n);
}

std::shared_ptr<const HashPairProvider> tabulation_provider(std::uint64_t seed, std::size_t n) {
  return std::make_shared<TabulationProvider>(seed, n);
}

std::shared_ptr<const HashPairProvider> explicit_provider(std::unordered_map<Key, BinPair> pairs,
                                                          std::size_t n,
                                                          std::uint64_t fallback_seed) {
  return std::make_shared<ExplicitProvider>(std::move(pairs), n, fallback_seed);
}

}  // namespace dancewalk
