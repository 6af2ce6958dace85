#include <cmath>

#include "core/generators.hpp"
#include "core/simulation.hpp"
#include "doctest.h"
#include "stats.hpp"

using namespace graphlb;

namespace {

SimConfig base(double lambda, double horizon, std::uint64_t seed) {
  SimConfig cfg;
  cfg.lambda = lambda;
  cfg.horizon = horizon;
  cfg.seed = seed;
  cfg.grid = 0.5;
  return cfg;
}

}  // namespace

TEST_SUITE("simulation") {

TEST_CASE("graph jsq on isolated vertices keeps the arrival") {
  const Graph g = gen_isolated(6);
  const std::vector<std::uint32_t> init{3, 0, 2, 1, 0, 4};
  OccupancyState s(init, false);
  Rng rng(1);
  for (Vertex v = 0; v < 6; ++v) CHECK(assign_graph_jsq(g, s, v, rng) == v);
}

TEST_CASE("graph jsq breaks ties uniformly") {
  const Graph g = gen_clique(4);
  const std::vector<std::uint32_t> init{2, 0, 1, 0};
  OccupancyState s(init, false);
  Rng rng(2);
  std::vector<std::uint64_t> counts(2, 0);
  for (int i = 0; i < 10000; ++i) {
    const auto k = assign_graph_jsq(g, s, static_cast<Vertex>(i % 4), rng);
    REQUIRE(k.has_value());
    REQUIRE((*k == 1 || *k == 3));
    ++counts[*k == 1 ? 0 : 1];
  }
  CHECK(testing::chi_square_uniform(counts) < testing::chi_square_critical(1));
}

TEST_CASE("graph jsq discards when the neighborhood is full") {
  const Graph g = gen_ring(5);
  const std::vector<std::uint32_t> init{1, 1, 0, 0, 1};
  OccupancyState s(init, false);
  Rng rng(3);
  CHECK_FALSE(assign_graph_jsq(g, s, 0, rng, 1).has_value());
  CHECK(assign_graph_jsq(g, s, 1, rng, 1) == 2u);
  CHECK(assign_graph_jsq(g, s, 0, rng, 2).has_value());
}

TEST_CASE("cjsq examples") {
  Rng rng(4);
  const std::vector<std::uint32_t> a{1, 0, 2, 0};
  OccupancyState sa(a, true);
  for (int i = 0; i < 100; ++i) CHECK(assign_cjsq(sa, 0, rng) == 1u);

  const std::vector<std::uint32_t> b{5, 0, 0, 5};
  OccupancyState sb(b, true);
  std::vector<std::uint64_t> two(2, 0);
  for (int i = 0; i < 10000; ++i) {
    const Vertex k = assign_cjsq(sb, 1, rng);
    REQUIRE((k == 1 || k == 2));
    ++two[k - 1];
  }
  CHECK(testing::chi_square_uniform(two) < testing::chi_square_critical(1));

  const std::vector<std::uint32_t> c{3, 1, 4, 1, 5, 9, 2, 6};
  OccupancyState sc(c, true);
  std::vector<std::uint64_t> all(8, 0);
  for (int i = 0; i < 40000; ++i) ++all[assign_cjsq(sc, 7, rng)];
  CHECK(testing::chi_square_uniform(all) < testing::chi_square_critical(7));
}

TEST_CASE("negligible arrival rate gives an empty trace") {
  const Trace t = simulate(gen_ring(20), base(1e-9, 50.0, 1));
  CHECK(t.arrivals.back() == 0);
  CHECK(t.departures.back() == 0);
  for (std::size_t s = 0; s < t.samples(); ++s) CHECK(t.count(s, 1) == 0);
  CHECK(t.times.back() == doctest::Approx(50.0));
}

TEST_CASE("trace invariants") {
  SimConfig cfg = base(0.9, 100.0, 5);
  cfg.buffer = 3;
  const Trace t = simulate(gen_erdos_renyi(200, 0.02, 5), cfg);
  CHECK(t.samples() == 201);
  for (std::size_t s = 0; s < t.samples(); ++s) {
    std::uint64_t tasks = 0;
    for (std::size_t i = 1; i <= t.levels() + 1; ++i) {
      REQUIRE(t.count(s, i + 1) <= t.count(s, i));
      tasks += t.count(s, i);
    }
    REQUIRE(t.count(s, 1) <= 200);
    REQUIRE(t.count(s, 4) == 0);
    REQUIRE(t.arrivals[s] == tasks + t.departures[s] + t.discards[s]);
    if (s > 0) REQUIRE(t.times[s] > t.times[s - 1]);
  }
  CHECK(t.discards.back() > 0);
}

TEST_CASE("simulation is deterministic per seed") {
  const Graph g = gen_ring(100);
  const Trace a = simulate(g, base(0.8, 50.0, 9));
  const Trace b = simulate(g, base(0.8, 50.0, 9));
  const Trace c = simulate(g, base(0.8, 50.0, 10));
  CHECK(a.occupancy == b.occupancy);
  CHECK(a.arrivals == b.arrivals);
  CHECK_FALSE(a.occupancy == c.occupancy);
}

TEST_CASE("isolated servers form independent M/M/1 queues") {
  SimConfig cfg = base(0.5, 2000.0, 21);
  cfg.record_waits = true;
  const Trace t = simulate(gen_isolated(100), cfg);
  const StationarySummary st = stationary_stats(t, 500.0);
  for (std::size_t i = 1; i <= 4; ++i) {
    const double expected = std::pow(0.5, static_cast<double>(i));
    CHECK(std::abs(st.mean_q[i - 1] - expected) <= 3.0 * st.se_q[i - 1]);
  }
  REQUIRE(st.has_fcfs);
  CHECK(std::abs(st.wait_fcfs - 1.0) <= 3.0 * st.wait_fcfs_se);
  CHECK(std::abs(st.wait_little - 1.0) <= 3.0 * st.wait_little_se);
}

TEST_CASE("FCFS waits agree with Little's law on a ring") {
  SimConfig cfg = base(0.85, 1500.0, 22);
  cfg.record_waits = true;
  const Trace t = simulate(gen_ring(200), cfg);
  const StationarySummary st = stationary_stats(t, 300.0);
  const double sep = std::abs(st.wait_fcfs - st.wait_little) /
                     std::sqrt(st.wait_fcfs_se * st.wait_fcfs_se + st.wait_little_se * st.wait_little_se);
  CHECK(sep <= 4.0);
}

TEST_CASE("clique at high load keeps almost every task waiting-free") {
  const Trace t = simulate(gen_clique(500), base(0.9, 500.0, 23));
  const StationarySummary st = stationary_stats(t, 100.0);
  CHECK(std::abs(st.mean_q[0] - 0.9) <= 0.02);
  CHECK(st.wait_little <= 0.05);
}

TEST_CASE("more connectivity never waits longer") {
  const std::size_t n = 400;
  auto wait = [&](const Graph& g) {
    return stationary_stats(simulate(g, base(0.9, 400.0, 24)), 100.0);
  };
  const auto iso = wait(gen_isolated(n));
  const auto ring = wait(gen_ring(n));
  const auto dense = wait(gen_erdos_renyi(n, 0.05, 24));
  CHECK(ring.wait_little + 3 * ring.wait_little_se < iso.wait_little - 3 * iso.wait_little_se);
  CHECK(dense.wait_little + 3 * dense.wait_little_se < ring.wait_little - 3 * ring.wait_little_se);
}

TEST_CASE("cjsq(0) on any graph matches the clique in law") {
  SimConfig cfg = base(0.9, 400.0, 25);
  cfg.policy = Policy::kCjsq;
  cfg.cjsq_n = 0;
  const auto a = stationary_stats(simulate(gen_isolated(300), cfg), 100.0);
  cfg.policy = Policy::kGraphJsq;
  cfg.seed = 26;
  const auto b = stationary_stats(simulate(gen_clique(300), cfg), 100.0);
  const double sep = std::abs(a.mean_q[0] - b.mean_q[0]) /
                     std::sqrt(a.se_q[0] * a.se_q[0] + b.se_q[0] * b.se_q[0]);
  CHECK(sep <= 4.0);
}

TEST_CASE("group tracking") {
  SimConfig cfg = base(0.9, 30.0, 27);
  for (Vertex v = 0; v < 50; ++v) cfg.group.push_back(v);
  const Trace t = simulate(gen_ring(50), cfg);
  CHECK(t.group_size == 50);
  for (std::size_t s = 0; s < t.samples(); ++s)
    for (std::size_t i = 1; i <= 3; ++i) REQUIRE(t.group_count(s, i) == t.count(s, i));

  cfg.group = {0, 1, 2};
  const Trace u = simulate(gen_ring(50), cfg);
  for (std::size_t s = 0; s < u.samples(); ++s) REQUIRE(u.group_count(s, 1) <= 3);
}

TEST_CASE("initial state is respected") {
  SimConfig cfg = base(0.5, 5.0, 28);
  cfg.initial = std::vector<std::uint32_t>(10, 2);
  const Trace t = simulate(gen_ring(10), cfg);
  CHECK(t.count(0, 2) == 10);
  CHECK(t.count(0, 3) == 0);
  cfg.initial = std::vector<std::uint32_t>(9, 2);
  CHECK_THROWS(simulate(gen_ring(10), cfg));
}

TEST_CASE("batch-means helper") {
  const auto [m, se] = mean_and_se({1.0, 2.0, 3.0, 4.0});
  CHECK(m == doctest::Approx(2.5));
  CHECK(se == doctest::Approx(std::sqrt(1.6666666667 / 4.0)));
}

}
