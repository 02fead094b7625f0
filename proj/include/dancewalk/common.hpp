#pragma once

#include <cstdint>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>

namespace dancewalk {

using VertexId = std::uint32_t;
using EdgeId = std::uint32_t;

inline constexpr EdgeId kNoEdge = std::numeric_limits<EdgeId>::max();
inline constexpr VertexId kNoVertex = std::numeric_limits<VertexId>::max();

// Bad parameters passed at construction time.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A caller asked for a state transition the data structure cannot represent:
// a full slot, a dead edge, a path that is not a directed chain. These signal
// logic bugs in the policy layer, never expected runtime conditions.
class StructuralError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

using Rng = std::mt19937_64;

// Uniform draw in [0, bound) consuming exactly one word from the generator.
// Multiply-shift keeps the result reproducible across standard libraries,
// which std::uniform_int_distribution does not.
inline std::uint32_t uniform_below(Rng& rng, std::uint32_t bound) {
  const unsigned __int128 wide =
      static_cast<unsigned __int128>(rng()) * static_cast<unsigned __int128>(bound);
  return static_cast<std::uint32_t>(wide >> 64);
}

}  // namespace dancewalk
