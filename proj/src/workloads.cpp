#include <algorithm>
#include <fstream>
#include <istream>
#include <queue>
#include <sstream>
#include <charconv>

#include "dancewalk/harness.hpp"
#include "dancewalk/rank_forest.hpp"

namespace dancewalk::harness {

namespace {

std::vector<Edge> pruefer_tree(std::size_t n, Rng& rng) {
  std::vector<Edge> edges;
  if (n < 2) return edges;
  if (n == 2) return {{0, 1}};
  const auto nn = static_cast<std::uint32_t>(n);
  std::vector<VertexId> code(n - 2);
  for (auto& c : code) c = uniform_below(rng, nn);
  std::vector<std::uint32_t> degree(n, 1);
  for (VertexId c : code) ++degree[c];
  std::priority_queue<VertexId, std::vector<VertexId>, std::greater<>> leaves;
  for (VertexId v = 0; v < n; ++v) {
    if (degree[v] == 1) leaves.push(v);
  }
  for (VertexId c : code) {
    const VertexId leaf = leaves.top();
    leaves.pop();
    edges.emplace_back(leaf, c);
    if (--degree[c] == 1) leaves.push(c);
  }
  const VertexId a = leaves.top();
  leaves.pop();
  edges.emplace_back(a, leaves.top());
  return edges;
}

void shuffle(std::vector<Edge>& edges, Rng& rng) {
  for (std::size_t i = edges.size(); i > 1; --i) {
    std::swap(edges[i - 1], edges[uniform_below(rng, static_cast<std::uint32_t>(i))]);
  }
}

}  // namespace

std::string_view to_string(WorkloadKind kind) {
  switch (kind) {
    case WorkloadKind::RandomRecursiveTree: return "random-recursive-tree";
    case WorkloadKind::UniformAttachment: return "uniform-attachment";
    case WorkloadKind::Path: return "path";
    case WorkloadKind::Star: return "star";
    case WorkloadKind::BalancedBinary: return "balanced-binary";
    case WorkloadKind::RandomForest: return "random-forest";
    case WorkloadKind::File: return "file";
  }
  return "unknown";
}

std::optional<WorkloadKind> parse_workload(std::string_view name) {
  for (auto kind : {WorkloadKind::RandomRecursiveTree, WorkloadKind::UniformAttachment,
                    WorkloadKind::Path, WorkloadKind::Star, WorkloadKind::BalancedBinary,
                    WorkloadKind::RandomForest, WorkloadKind::File}) {
    if (to_string(kind) == name) return kind;
  }
  return std::nullopt;
}

std::vector<Edge> generate_workload(const WorkloadSpec& spec) {
  if (spec.kind == WorkloadKind::File) {
    std::ifstream in(spec.path);
    if (!in) throw std::runtime_error("cannot open workload file " + spec.path);
    return parse_edge_list(in, spec.n);
  }
  if (spec.n == 0) throw ConfigError("workload needs at least one vertex");
  const std::size_t n = spec.n;
  Rng rng(spec.seed ^ 0xbb67ae8584caa73bULL);
  std::vector<Edge> edges;
  edges.reserve(n);
  switch (spec.kind) {
    case WorkloadKind::Path:
      for (VertexId i = 1; i < n; ++i) edges.emplace_back(i - 1, i);
      break;
    case WorkloadKind::Star:
      for (VertexId i = 1; i < n; ++i) edges.emplace_back(0, i);
      break;
    case WorkloadKind::RandomRecursiveTree:
      for (VertexId i = 1; i < n; ++i) edges.emplace_back(uniform_below(rng, i), i);
      break;
    case WorkloadKind::RandomForest:
      for (VertexId i = 1; i < n; ++i) {
        if (uniform_below(rng, 8) == 0) continue;
        edges.emplace_back(uniform_below(rng, i), i);
      }
      break;
    case WorkloadKind::UniformAttachment:
      edges = pruefer_tree(n, rng);
      shuffle(edges, rng);
      break;
    case WorkloadKind::BalancedBinary:
      for (std::size_t half = 1; half < n; half *= 2) {
        for (std::size_t i = 0; i + half < n; i += 2 * half) {
          edges.emplace_back(static_cast<VertexId>(i), static_cast<VertexId>(i + half));
        }
      }
      break;
    case WorkloadKind::File:
      break;
  }
  return edges;
}

std::vector<Edge> parse_edge_list(std::istream& in, std::size_t n) {
  if (n == 0) throw ConfigError("edge list needs a positive vertex count");
  SizeForest components(n);
  std::vector<Edge> edges;
  std::string text;
  std::size_t line = 0;
  while (std::getline(in, text)) {
    ++line;
    if (auto hash = text.find('#'); hash != std::string::npos) text.resize(hash);
    std::istringstream fields(text);
    std::vector<std::string> tok;
    for (std::string f; fields >> f;) tok.push_back(std::move(f));
    if (tok.empty()) continue;
    if (tok.size() != 2) throw ParseError(line, "expected two vertex ids");
    VertexId ends[2];
    for (int i = 0; i < 2; ++i) {
      std::uint64_t value = 0;
      auto [ptr, ec] = std::from_chars(tok[i].data(), tok[i].data() + tok[i].size(), value);
      if (ec != std::errc{} || ptr != tok[i].data() + tok[i].size()) {
        throw ParseError(line, "invalid vertex id '" + tok[i] + "'");
      }
      if (value >= n) throw ParseError(line, "vertex id " + tok[i] + " out of range");
      ends[i] = static_cast<VertexId>(value);
    }
    if (ends[0] == ends[1]) throw ParseError(line, "self-loop");
    if (components.same(ends[0], ends[1])) throw ParseError(line, "edge closes a cycle");
    components.unite(ends[0], ends[1]);
    edges.emplace_back(ends[0], ends[1]);
  }
  return edges;
}

}  // namespace dancewalk::harness
