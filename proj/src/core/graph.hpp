#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace graphlb {

using Vertex = std::uint32_t;

// Immutable simple undirected graph in compressed adjacency form. Neighbor
// lists are sorted ascending; the symmetric/no-loop/no-duplicate invariants
// are established by every constructor.
class Graph {
 public:
  using EdgeSink = std::function<void(Vertex, Vertex)>;
  // A deterministic edge producer. It is invoked twice (count pass, fill
  // pass) and must emit the same edge sequence both times.
  using EdgeSource = std::function<void(const EdgeSink&)>;

  Graph() = default;

  // Builds from an explicit edge list. Self-loops, out-of-range ids and
  // duplicate edges (in either orientation) are rejected.
  static Graph from_edges(std::size_t n,
                          const std::vector<std::pair<Vertex, Vertex>>& edges,
                          std::string label);

  // Builds without materializing the edge list. The source must emit each
  // undirected edge once, with no loops or repeats; this is checked.
  static Graph from_source(std::size_t n, const EdgeSource& source,
                           std::string label);

  std::size_t vertex_count() const noexcept { return n_; }
  std::size_t edge_count() const noexcept { return adjacency_.size() / 2; }

  std::span<const Vertex> neighbors(Vertex v) const {
    return {adjacency_.data() + offsets_[v],
            adjacency_.data() + offsets_[v + 1]};
  }
  std::size_t degree(Vertex v) const { return offsets_[v + 1] - offsets_[v]; }
  std::size_t min_degree() const;
  std::size_t max_degree() const;
  double mean_degree() const;
  bool adjacent(Vertex u, Vertex v) const;

  const std::string& label() const noexcept { return label_; }

  // Full invariant check; returns an empty string when the graph is valid.
  std::string validate() const;

  // Order-independent fingerprint of the edge set, for provenance records.
  std::uint64_t fingerprint() const;

  bool operator==(const Graph& other) const {
    return n_ == other.n_ && offsets_ == other.offsets_ &&
           adjacency_ == other.adjacency_;
  }

 private:
  std::size_t n_ = 0;
  std::vector<std::uint64_t> offsets_{0};
  std::vector<Vertex> adjacency_;
  std::string label_;
};

// {v} together with its neighbors, sorted ascending.
std::vector<Vertex> closed_neighborhood(const Graph& g, Vertex v);

// Edge-list text: header "N M" followed by M lines "u v" (0-based). Loading
// applies the symmetric closure and rejects malformed lines, out-of-range
// ids, self-loops and duplicate edges.
Graph load_edge_list(std::string_view text);
Graph load_edge_list_file(const std::string& path);

// Canonical form: edges with u < v, sorted lexicographically.
std::string save_edge_list(const Graph& g);
void save_edge_list_file(const Graph& g, const std::string& path);

}  // namespace graphlb
