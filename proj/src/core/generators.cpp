#include "core/generators.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "core/error.hpp"
#include "core/fenwick.hpp"
#include "core/rng.hpp"

namespace graphlb {

namespace {

constexpr std::array<std::pair<Family, std::string_view>, 8> kFamilyNames{{
    {Family::kClique, "clique"},
    {Family::kRing, "ring"},
    {Family::kToricGrid, "toric_grid"},
    {Family::kErdosRenyi, "erdos_renyi"},
    {Family::kErasedRegular, "erased_regular"},
    {Family::kRggTorus, "rgg_torus"},
    {Family::kCompleteBipartite, "complete_bipartite"},
    {Family::kIsolated, "isolated"},
}};

std::string fmt_double(double x) {
  std::ostringstream os;
  os.precision(10);
  os << x;
  return os.str();
}

}  // namespace

std::string_view family_name(Family f) {
  for (const auto& [family, name] : kFamilyNames) {
    if (family == f) return name;
  }
  return "unknown";
}

std::optional<Family> parse_family(std::string_view name) {
  for (const auto& [family, known] : kFamilyNames) {
    if (known == name) return family;
  }
  return std::nullopt;
}

Graph gen_clique(std::size_t n) {
  require(n >= 1, "clique needs n >= 1");
  return Graph::from_source(
      n,
      [n](const Graph::EdgeSink& emit) {
        for (Vertex u = 0; u < n; ++u) {
          for (Vertex v = u + 1; v < n; ++v) emit(u, v);
        }
      },
      "clique n=" + std::to_string(n));
}

Graph gen_ring(std::size_t n) {
  require(n >= 3, "ring needs n >= 3");
  return Graph::from_source(
      n,
      [n](const Graph::EdgeSink& emit) {
        for (Vertex u = 0; u < n; ++u) emit(u, static_cast<Vertex>((u + 1) % n));
      },
      "ring n=" + std::to_string(n));
}

Graph gen_toric_grid(std::size_t width, std::size_t height) {
  require(width >= 3 && height >= 3, "toric grid needs width, height >= 3");
  const std::size_t n = width * height;
  return Graph::from_source(
      n,
      [width, height](const Graph::EdgeSink& emit) {
        for (std::size_t y = 0; y < height; ++y) {
          for (std::size_t x = 0; x < width; ++x) {
            const auto id = static_cast<Vertex>(y * width + x);
            emit(id, static_cast<Vertex>(y * width + (x + 1) % width));
            emit(id, static_cast<Vertex>(((y + 1) % height) * width + x));
          }
        }
      },
      "toric_grid w=" + std::to_string(width) + " h=" + std::to_string(height));
}

Graph gen_isolated(std::size_t n) {
  require(n >= 1, "isolated graph needs n >= 1");
  return Graph::from_source(n, [](const Graph::EdgeSink&) {},
                            "isolated n=" + std::to_string(n));
}

Graph gen_erdos_renyi(std::size_t n, double p, std::uint64_t seed) {
  require(n >= 1, "erdos_renyi needs n >= 1");
  require(p >= 0.0 && p <= 1.0, "erdos_renyi needs 0 <= p <= 1");
  std::string label = "erdos_renyi n=" + std::to_string(n) + " p=" + fmt_double(p) +
                      " seed=" + std::to_string(seed);
  if (p == 0.0) return Graph::from_source(n, [](const Graph::EdgeSink&) {}, label);
  if (p == 1.0) {
    return Graph::from_source(
        n,
        [n](const Graph::EdgeSink& emit) {
          for (Vertex u = 0; u < n; ++u) {
            for (Vertex v = u + 1; v < n; ++v) emit(u, v);
          }
        },
        label);
  }
  // Geometric skipping over pairs (w, v), w < v, in row order. The stream
  // is re-created on every pass so both passes see the same edges.
  const double log_q = std::log1p(-p);
  return Graph::from_source(
      n,
      [n, seed, log_q](const Graph::EdgeSink& emit) {
        Rng rng(seed, Stream::kGraph);
        std::int64_t v = 1;
        std::int64_t w = -1;
        const auto nn = static_cast<std::int64_t>(n);
        while (v < nn) {
          const double skip = std::floor(std::log1p(-rng.uniform()) / log_q);
          if (skip > static_cast<double>(nn) * static_cast<double>(nn)) break;
          w += 1 + static_cast<std::int64_t>(skip);
          while (w >= v && v < nn) {
            w -= v;
            ++v;
          }
          if (v < nn) emit(static_cast<Vertex>(w), static_cast<Vertex>(v));
        }
      },
      label);
}

Graph gen_erased_regular(std::size_t n, std::size_t d, std::uint64_t seed) {
  require(n >= 1, "erased_regular needs n >= 1");
  require(d < n, "erased_regular needs d < n");
  require((n * d) % 2 == 0, "erased_regular needs n*d even");

  // Half-edge h belongs to vertex h / d. The lowest unpaired half-edge is
  // matched to a uniformly chosen other unpaired half-edge.
  const std::size_t total = n * d;
  Fenwick unpaired = Fenwick::ones(total);
  std::vector<char> paired(total, 0);
  std::vector<std::pair<Vertex, Vertex>> edges;
  edges.reserve(total / 2);
  Rng rng(seed, Stream::kGraph);
  std::size_t next = 0;
  for (std::size_t remaining = total; remaining > 0; remaining -= 2) {
    while (paired[next]) ++next;
    paired[next] = 1;
    unpaired.add(next, -1);
    const auto rank = static_cast<std::int64_t>(rng.below(remaining - 1)) + 1;
    const std::size_t mate = unpaired.select(rank);
    paired[mate] = 1;
    unpaired.add(mate, -1);
    auto u = static_cast<Vertex>(next / d);
    auto v = static_cast<Vertex>(mate / d);
    if (u == v) continue;
    if (u > v) std::swap(u, v);
    edges.emplace_back(u, v);
  }
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  return Graph::from_edges(n, edges,
                           "erased_regular n=" + std::to_string(n) + " d=" +
                               std::to_string(d) + " seed=" + std::to_string(seed));
}

double torus_distance(const Point2& a, const Point2& b) {
  double best = std::numeric_limits<double>::infinity();
  for (int sx = -1; sx <= 1; ++sx) {
    for (int sy = -1; sy <= 1; ++sy) {
      const double dx = a[0] - b[0] + sx;
      const double dy = a[1] - b[1] + sy;
      best = std::min(best, std::hypot(dx, dy));
    }
  }
  return best;
}

Graph rgg_torus_from_positions(const std::vector<Point2>& positions, double radius,
                               std::string label) {
  require(radius >= 0.0 && radius <= 0.5, "rgg_torus needs 0 <= radius <= 0.5");
  const std::size_t n = positions.size();
  std::vector<std::pair<Vertex, Vertex>> edges;
  if (radius > 0.0) {
    const double r2 = radius * radius;
    for (Vertex u = 0; u < n; ++u) {
      for (Vertex v = u + 1; v < n; ++v) {
        // Cheap wrapped-coordinate prefilter before the exact nine-shift metric.
        double dx = std::abs(positions[u][0] - positions[v][0]);
        double dy = std::abs(positions[u][1] - positions[v][1]);
        dx = std::min(dx, 1.0 - dx);
        dy = std::min(dy, 1.0 - dy);
        if (dx * dx + dy * dy > r2 * (1.0 + 1e-9)) continue;
        if (torus_distance(positions[u], positions[v]) < radius) edges.emplace_back(u, v);
      }
    }
  }
  return Graph::from_edges(n, edges, std::move(label));
}

Graph gen_rgg_torus(std::size_t n, double radius, std::uint64_t seed) {
  require(n >= 1, "rgg_torus needs n >= 1");
  Rng rng(seed, Stream::kPositions);
  std::vector<Point2> positions(n);
  for (auto& pt : positions) {
    pt[0] = rng.uniform();
    pt[1] = rng.uniform();
  }
  return rgg_torus_from_positions(positions, radius,
                                  "rgg_torus n=" + std::to_string(n) + " radius=" +
                                      fmt_double(radius) + " seed=" + std::to_string(seed));
}

double rgg_radius_for_degree(std::size_t n, double c) {
  require(n >= 1 && c >= 0.0, "rgg radius needs n >= 1, c >= 0");
  return std::sqrt(c / (std::numbers::pi * static_cast<double>(n)));
}

std::size_t bipartite_part_size(std::size_t n, double c) {
  // The small slack keeps ceil(0.3 * 10) at 3 despite rounding in c * n.
  return static_cast<std::size_t>(std::ceil(c * static_cast<double>(n) - 1e-9));
}

Graph gen_complete_bipartite(std::size_t n, double c) {
  require(c > 0.0 && c < 1.0, "complete_bipartite needs 0 < c < 1");
  const std::size_t a = bipartite_part_size(n, c);
  require(a >= 1 && a < n, "complete_bipartite parts must both be nonempty");
  return Graph::from_source(
      n,
      [n, a](const Graph::EdgeSink& emit) {
        for (Vertex u = 0; u < a; ++u) {
          for (auto v = static_cast<Vertex>(a); v < n; ++v) emit(u, v);
        }
      },
      "complete_bipartite n=" + std::to_string(n) + " c=" + fmt_double(c) +
          " A=0.." + std::to_string(a - 1));
}

Graph generate(const GraphGenSpec& spec) {
  switch (spec.family) {
    case Family::kClique: return gen_clique(spec.n);
    case Family::kRing: return gen_ring(spec.n);
    case Family::kToricGrid: return gen_toric_grid(spec.width, spec.height);
    case Family::kErdosRenyi: return gen_erdos_renyi(spec.n, spec.p, spec.seed);
    case Family::kErasedRegular: return gen_erased_regular(spec.n, spec.d, spec.seed);
    case Family::kRggTorus: return gen_rgg_torus(spec.n, spec.radius, spec.seed);
    case Family::kCompleteBipartite: return gen_complete_bipartite(spec.n, spec.c);
    case Family::kIsolated: return gen_isolated(spec.n);
  }
  fail(ErrorCode::kInvalidArgument, "unknown graph family");
}

}  // namespace graphlb
