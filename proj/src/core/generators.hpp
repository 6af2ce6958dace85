#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "core/graph.hpp"

namespace graphlb {

enum class Family {
  kClique,
  kRing,
  kToricGrid,
  kErdosRenyi,
  kErasedRegular,
  kRggTorus,
  kCompleteBipartite,
  kIsolated,
};

std::string_view family_name(Family f);
std::optional<Family> parse_family(std::string_view name);

// Family-specific parameters; fields not used by a family are ignored.
struct GraphGenSpec {
  Family family = Family::kClique;
  std::size_t n = 0;
  double p = 0.0;            // erdos_renyi edge probability
  std::size_t d = 0;         // erased_regular degree
  double radius = 0.0;       // rgg_torus connection radius
  double c = 0.0;            // complete_bipartite part fraction
  std::size_t width = 0;     // toric_grid
  std::size_t height = 0;    // toric_grid
  std::uint64_t seed = 0;
};

Graph generate(const GraphGenSpec& spec);

Graph gen_clique(std::size_t n);
Graph gen_ring(std::size_t n);
Graph gen_toric_grid(std::size_t width, std::size_t height);
Graph gen_isolated(std::size_t n);
Graph gen_erdos_renyi(std::size_t n, double p, std::uint64_t seed);
Graph gen_erased_regular(std::size_t n, std::size_t d, std::uint64_t seed);
Graph gen_rgg_torus(std::size_t n, double radius, std::uint64_t seed);
Graph gen_complete_bipartite(std::size_t n, double c);

using Point2 = std::array<double, 2>;

// Geometric graph on fixed positions in the unit torus.
Graph rgg_torus_from_positions(const std::vector<Point2>& positions, double radius,
                               std::string label);

// Distance in [0,1)^2 with periodic boundary: minimum over the nine shifts.
double torus_distance(const Point2& a, const Point2& b);

// Connection radius that gives expected average degree c on n points.
double rgg_radius_for_degree(std::size_t n, double c);

// Size of part A in the complete bipartite construction, ceil(c n).
std::size_t bipartite_part_size(std::size_t n, double c);

}  // namespace graphlb
