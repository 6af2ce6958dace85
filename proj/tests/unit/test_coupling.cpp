#include <cmath>

#include "core/coupling.hpp"
#include "core/generators.hpp"
#include "core/simulation.hpp"
#include "doctest.h"

using namespace graphlb;

namespace {

SimConfig cfg_for(double lambda, double horizon, std::uint64_t seed) {
  SimConfig cfg;
  cfg.lambda = lambda;
  cfg.horizon = horizon;
  cfg.seed = seed;
  cfg.grid = 1.0;
  return cfg;
}

}  // namespace

TEST_SUITE("coupling") {

TEST_CASE("clique never violates the criterion") {
  for (std::size_t n : {0u, 3u, 10u}) {
    const CoupledTrace c = simulate_coupled(gen_clique(60), cfg_for(0.9, 40.0, 1), n);
    CHECK(c.final_delta() == 0);
    CHECK(c.graph_system.occupancy == c.hybrid_system.occupancy);
  }
}

TEST_CASE("ring coupling bound holds pathwise") {
  for (TieRule rule : {TieRule::kEarliest, TieRule::kLatest}) {
    const CoupledTrace c = simulate_coupled(gen_ring(50), cfg_for(0.9, 100.0, 2), 5, rule);
    CHECK(c.max_bound_gap <= 0);
    for (auto gap : c.bound_gap) REQUIRE(gap <= 0);
    CHECK(c.final_delta() > 0);
  }
}

TEST_CASE("bound holds on random graphs") {
  for (std::uint64_t s = 0; s < 10; ++s) {
    const CoupledTrace c =
        simulate_coupled(gen_erdos_renyi(80, 0.05, s), cfg_for(0.95, 50.0, s), 1 + s % 4);
    REQUIRE(c.max_bound_gap <= 0);
  }
}

TEST_CASE("isolated vertices violate often") {
  const CoupledTrace c = simulate_coupled(gen_isolated(20), cfg_for(0.9, 200.0, 3), 0);
  REQUIRE(c.arrivals > 0);
  CHECK(static_cast<double>(c.final_delta()) / static_cast<double>(c.arrivals) > 0.1);
  CHECK(c.max_bound_gap <= 0);
}

TEST_CASE("delta is nondecreasing and bounded by arrivals") {
  const CoupledTrace c = simulate_coupled(gen_ring(40), cfg_for(0.8, 60.0, 4), 2);
  for (std::size_t s = 1; s < c.delta.size(); ++s) REQUIRE(c.delta[s] >= c.delta[s - 1]);
  CHECK(c.final_delta() <= c.arrivals);
  CHECK(c.delta.size() == c.graph_system.samples());
}

TEST_CASE("graph marginal matches an uncoupled run in law") {
  // Time-averaged q_1, q_2 over many replications of each.
  const Graph g = gen_ring(50);
  const int reps = 40;
  double a1 = 0, a2 = 0, b1 = 0, b2 = 0, va = 0, vb = 0;
  for (int r = 0; r < reps; ++r) {
    const SimConfig cfg = cfg_for(0.8, 60.0, 1000 + static_cast<std::uint64_t>(r));
    const auto sa = stationary_stats(simulate_coupled(g, cfg, 3).graph_system, 10.0, 5);
    SimConfig other = cfg;
    other.seed += 5000;
    const auto sb = stationary_stats(simulate(g, other), 10.0, 5);
    a1 += sa.mean_q[0];
    a2 += sa.mean_q[1];
    b1 += sb.mean_q[0];
    b2 += sb.mean_q[1];
    va += sa.mean_q[1] * sa.mean_q[1];
    vb += sb.mean_q[1] * sb.mean_q[1];
  }
  a1 /= reps, a2 /= reps, b1 /= reps, b2 /= reps;
  const double sda = std::sqrt(std::max(va / reps - a2 * a2, 1e-12) / reps);
  const double sdb = std::sqrt(std::max(vb / reps - b2 * b2, 1e-12) / reps);
  CHECK(std::abs(a2 - b2) <= 4.0 * std::sqrt(sda * sda + sdb * sdb));
  CHECK(std::abs(a1 - b1) <= 0.01);
}

TEST_CASE("tie rule names") {
  CHECK(parse_tie_rule("earliest") == TieRule::kEarliest);
  CHECK(parse_tie_rule("latest") == TieRule::kLatest);
  CHECK_FALSE(parse_tie_rule("first").has_value());
  CHECK(tie_rule_name(TieRule::kLatest) == "latest");
}

}
