#include "dancewalk/script.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <unordered_set>

namespace dancewalk {

ParseError::ParseError(std::size_t line, const std::string& what)
    : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}

namespace {

std::uint64_t parse_u64(const std::string& field, std::size_t line) {
  std::uint64_t out = 0;
  const char* first = field.data();
  const char* last = field.data() + field.size();
  auto [ptr, ec] = std::from_chars(first, last, out);
  if (ec != std::errc{} || ptr != last || field.empty()) {
    throw ParseError(line, "expected an unsigned 64-bit integer, got '" + field + "'");
  }
  return out;
}

}  // namespace

Script parse_script(std::istream& in) {
  Script script;
  std::string text;
  std::size_t line = 0;
  while (std::getline(in, text)) {
    ++line;
    if (auto hash = text.find('#'); hash != std::string::npos) text.resize(hash);
    std::istringstream fields(text);
    std::vector<std::string> tok;
    for (std::string f; fields >> f;) tok.push_back(std::move(f));
    if (tok.empty()) continue;

    ScriptOp op;
    if (tok[0] == "I") {
      if (tok.size() != 3) throw ParseError(line, "insert takes a key and a value");
      op.kind = OpKind::Insert;
      op.value = parse_u64(tok[2], line);
    } else if (tok[0] == "D" || tok[0] == "Q") {
      if (tok.size() != 2) throw ParseError(line, "delete and query take exactly one key");
      op.kind = tok[0] == "D" ? OpKind::Delete : OpKind::Query;
    } else {
      throw ParseError(line, "unknown operation '" + tok[0] + "'");
    }
    op.key = parse_u64(tok[1], line);
    script.push_back(op);
  }
  return script;
}

Script load_script(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open script file " + path);
  return parse_script(in);
}

void write_script(std::ostream& out, const Script& script) {
  for (const ScriptOp& op : script) {
    switch (op.kind) {
      case OpKind::Insert: out << "I " << op.key << ' ' << op.value << '\n'; break;
      case OpKind::Delete: out << "D " << op.key << '\n'; break;
      case OpKind::Query: out << "Q " << op.key << '\n'; break;
    }
  }
}

Script generate_script(const ScriptSpec& spec) {
  if (spec.n == 0) throw ConfigError("script generator needs a bin count");
  Rng rng(spec.seed ^ 0x6a09e667f3bcc909ULL);
  std::unordered_set<Key> used;
  std::vector<Key> present;
  Script script;

  auto fresh_key = [&] {
    Key k;
    do {
      k = rng();
    } while (!used.insert(k).second);
    return k;
  };
  auto maybe_query = [&](std::size_t mutation) {
    if (spec.query_every == 0 || mutation % spec.query_every != 0) return;
    if (!present.empty() && (rng() & 1U)) {
      script.push_back({OpKind::Query, present[uniform_below(rng, static_cast<std::uint32_t>(present.size()))], 0});
    } else {
      script.push_back({OpKind::Query, rng(), 0});
    }
  };

  const auto target = static_cast<std::size_t>(spec.load * static_cast<double>(spec.n));
  bool delete_next = true;
  for (std::size_t m = 1; m <= spec.mutations; ++m) {
    if (present.size() < target || present.empty() || !delete_next) {
      const Key k = fresh_key();
      present.push_back(k);
      script.push_back({OpKind::Insert, k, rng()});
      if (present.size() >= target) delete_next = true;
    } else {
      const std::size_t i = uniform_below(rng, static_cast<std::uint32_t>(present.size()));
      script.push_back({OpKind::Delete, present[i], 0});
      present[i] = present.back();
      present.pop_back();
      delete_next = false;
    }
    maybe_query(m);
  }
  return script;
}

}  // namespace dancewalk
