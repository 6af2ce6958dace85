#include "core/graph.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <limits>
#include <numeric>
#include <sstream>

#include "core/error.hpp"
#include "core/rng.hpp"

namespace graphlb {

namespace {

void check_edge(std::size_t n, Vertex u, Vertex v) {
  if (u >= n || v >= n) {
    fail(ErrorCode::kInvalidArgument,
         "edge (" + std::to_string(u) + "," + std::to_string(v) +
             ") references a vertex outside [0," + std::to_string(n) + ")");
  }
  if (u == v) {
    fail(ErrorCode::kInvalidArgument,
         "self-loop at vertex " + std::to_string(u));
  }
}

}  // namespace

Graph Graph::from_source(std::size_t n, const EdgeSource& source,
                         std::string label) {
  require(n < std::numeric_limits<Vertex>::max(), "too many vertices");
  Graph g;
  g.n_ = n;
  g.label_ = std::move(label);

  std::vector<std::uint64_t> degree(n, 0);
  source([&](Vertex u, Vertex v) {
    check_edge(n, u, v);
    ++degree[u];
    ++degree[v];
  });

  g.offsets_.assign(n + 1, 0);
  for (std::size_t v = 0; v < n; ++v) g.offsets_[v + 1] = g.offsets_[v] + degree[v];
  g.adjacency_.resize(g.offsets_[n]);

  std::vector<std::uint64_t> cursor(g.offsets_.begin(), g.offsets_.end() - 1);
  std::uint64_t emitted = 0;
  source([&](Vertex u, Vertex v) {
    ++emitted;
    if (cursor[u] >= g.offsets_[u + 1] || cursor[v] >= g.offsets_[v + 1]) {
      fail(ErrorCode::kInternal, "edge source is not deterministic");
    }
    g.adjacency_[cursor[u]++] = v;
    g.adjacency_[cursor[v]++] = u;
  });
  if (emitted * 2 != g.adjacency_.size()) {
    fail(ErrorCode::kInternal, "edge source is not deterministic");
  }

  for (std::size_t v = 0; v < n; ++v) {
    auto first = g.adjacency_.begin() + static_cast<std::ptrdiff_t>(g.offsets_[v]);
    auto last = g.adjacency_.begin() + static_cast<std::ptrdiff_t>(g.offsets_[v + 1]);
    if (!std::is_sorted(first, last)) std::sort(first, last);
    auto dup = std::adjacent_find(first, last);
    if (dup != last) {
      fail(ErrorCode::kInvalidArgument,
           "duplicate edge (" + std::to_string(v) + "," + std::to_string(*dup) + ")");
    }
  }
  return g;
}

Graph Graph::from_edges(std::size_t n,
                        const std::vector<std::pair<Vertex, Vertex>>& edges,
                        std::string label) {
  return from_source(
      n,
      [&edges](const EdgeSink& emit) {
        for (const auto& [u, v] : edges) emit(u, v);
      },
      std::move(label));
}

std::size_t Graph::min_degree() const {
  std::size_t best = n_ == 0 ? 0 : std::numeric_limits<std::size_t>::max();
  for (Vertex v = 0; v < n_; ++v) best = std::min(best, degree(v));
  return best;
}

std::size_t Graph::max_degree() const {
  std::size_t best = 0;
  for (Vertex v = 0; v < n_; ++v) best = std::max(best, degree(v));
  return best;
}

double Graph::mean_degree() const {
  return n_ == 0 ? 0.0 : static_cast<double>(adjacency_.size()) / static_cast<double>(n_);
}

bool Graph::adjacent(Vertex u, Vertex v) const {
  auto nb = neighbors(u);
  return std::binary_search(nb.begin(), nb.end(), v);
}

std::string Graph::validate() const {
  if (offsets_.size() != n_ + 1) return "offset table has wrong length";
  for (Vertex v = 0; v < n_; ++v) {
    auto nb = neighbors(v);
    for (std::size_t i = 0; i < nb.size(); ++i) {
      const Vertex u = nb[i];
      if (u >= n_) return "neighbor id out of range at vertex " + std::to_string(v);
      if (u == v) return "self-loop at vertex " + std::to_string(v);
      if (i > 0 && nb[i - 1] >= u) {
        return "neighbor list of vertex " + std::to_string(v) +
               " is not strictly increasing";
      }
      if (!adjacent(u, v)) {
        return "asymmetric edge (" + std::to_string(v) + "," + std::to_string(u) + ")";
      }
    }
  }
  return {};
}

std::uint64_t Graph::fingerprint() const {
  std::uint64_t h = mix64(n_);
  for (Vertex v = 0; v < n_; ++v) {
    for (Vertex u : neighbors(v)) {
      if (u > v) h = mix64(h ^ ((static_cast<std::uint64_t>(v) << 32) | u));
    }
  }
  return h;
}

std::vector<Vertex> closed_neighborhood(const Graph& g, Vertex v) {
  require(v < g.vertex_count(), "vertex out of range");
  auto nb = g.neighbors(v);
  std::vector<Vertex> out;
  out.reserve(nb.size() + 1);
  auto split = std::lower_bound(nb.begin(), nb.end(), v);
  out.insert(out.end(), nb.begin(), split);
  out.push_back(v);
  out.insert(out.end(), split, nb.end());
  return out;
}

namespace {

// Splits a line into whitespace-separated unsigned integers.
bool parse_numbers(std::string_view line, std::vector<std::uint64_t>& out) {
  out.clear();
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    if (i >= line.size()) break;
    std::uint64_t value = 0;
    auto [ptr, ec] = std::from_chars(line.data() + i, line.data() + line.size(), value);
    if (ec != std::errc()) return false;
    const std::size_t consumed = static_cast<std::size_t>(ptr - (line.data() + i));
    i += consumed;
    if (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r') return false;
    out.push_back(value);
  }
  return true;
}

[[noreturn]] void parse_error(std::size_t line_no, const std::string& what) {
  fail(ErrorCode::kParse, "line " + std::to_string(line_no) + ": " + what);
}

}  // namespace

Graph load_edge_list(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    lines.push_back(text.substr(start, end - start));
    start = end + 1;
  }
  // Trailing blank lines are tolerated.
  while (!lines.empty() &&
         lines.back().find_first_not_of(" \t\r") == std::string_view::npos) {
    lines.pop_back();
  }
  if (lines.empty()) parse_error(1, "missing header \"N M\"");

  std::vector<std::uint64_t> nums;
  if (!parse_numbers(lines[0], nums) || nums.size() != 2) {
    parse_error(1, "header must be \"N M\"");
  }
  const std::uint64_t n = nums[0];
  const std::uint64_t m = nums[1];
  if (n >= std::numeric_limits<Vertex>::max()) parse_error(1, "vertex count too large");
  if (lines.size() - 1 != m) {
    parse_error(lines.size(), "expected " + std::to_string(m) + " edge lines, found " +
                                  std::to_string(lines.size() - 1));
  }

  std::vector<std::pair<Vertex, Vertex>> edges;
  edges.reserve(m);
  for (std::size_t i = 1; i < lines.size(); ++i) {
    if (!parse_numbers(lines[i], nums) || nums.size() != 2) {
      parse_error(i + 1, "malformed edge line, expected \"u v\"");
    }
    if (nums[0] >= n || nums[1] >= n) parse_error(i + 1, "vertex id out of range");
    if (nums[0] == nums[1]) parse_error(i + 1, "self-loop");
    edges.emplace_back(static_cast<Vertex>(nums[0]), static_cast<Vertex>(nums[1]));
  }

  std::vector<std::pair<Vertex, Vertex>> sorted = edges;
  for (auto& e : sorted) {
    if (e.first > e.second) std::swap(e.first, e.second);
  }
  std::vector<std::size_t> order(sorted.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return sorted[a] < sorted[b]; });
  for (std::size_t i = 1; i < order.size(); ++i) {
    if (sorted[order[i]] == sorted[order[i - 1]]) {
      parse_error(order[i] + 2, "duplicate edge");
    }
  }
  return Graph::from_edges(n, edges, "edgelist");
}

Graph load_edge_list_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::kIo, "cannot open " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return load_edge_list(buffer.str());
}

std::string save_edge_list(const Graph& g) {
  std::string out = std::to_string(g.vertex_count()) + " " +
                    std::to_string(g.edge_count()) + "\n";
  for (Vertex v = 0; v < g.vertex_count(); ++v) {
    for (Vertex u : g.neighbors(v)) {
      if (u > v) {
        out += std::to_string(v);
        out += ' ';
        out += std::to_string(u);
        out += '\n';
      }
    }
  }
  return out;
}

void save_edge_list_file(const Graph& g, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorCode::kIo, "cannot write " + path);
  out << save_edge_list(g);
  if (!out) fail(ErrorCode::kIo, "write failed for " + path);
}

}  // namespace graphlb
