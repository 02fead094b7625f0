#pragma once

#include <cstddef>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "dancewalk/cuckoo.hpp"

namespace dancewalk {

// Malformed text input; `line()` is 1-based.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& what);
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

enum class OpKind : std::uint8_t { Insert, Delete, Query };

struct ScriptOp {
  OpKind kind = OpKind::Query;
  Key key = 0;
  Value value = 0;
};

using Script = std::vector<ScriptOp>;

// One operation per line: `I <key> <value>`, `D <key>` or `Q <key>`, with
// unsigned 64-bit decimal fields. Blank lines and `#` comments are skipped.
Script parse_script(std::istream& in);
Script load_script(const std::string& path);
void write_script(std::ostream& out, const Script& script);

// Mixed workload for the cuckoo table: fills to `load * n` fresh keys, then
// alternates deletes of random present keys with inserts of fresh keys, and
// interleaves one query every `query_every` mutations (0 disables queries).
struct ScriptSpec {
  std::size_t n = 0;
  double load = 0.2;
  std::size_t mutations = 100000;
  std::size_t query_every = 4;
  std::uint64_t seed = 0;
};

Script generate_script(const ScriptSpec& spec);

}  // namespace dancewalk
