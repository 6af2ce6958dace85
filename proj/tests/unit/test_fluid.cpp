#include <cmath>

#include "core/fluid.hpp"
#include "core/generators.hpp"
#include "core/simulation.hpp"
#include "doctest.h"

using namespace graphlb;

namespace {

double closed_form_q1(double lambda, double t) { return lambda * (1.0 - std::exp(-t)); }

Trace one_sample(std::size_t n, std::vector<std::uint64_t> q) {
  Trace t;
  t.n_servers = n;
  t.times = {0.0};
  t.occupancy = {std::move(q)};
  t.arrivals = t.departures = t.discards = {0};
  return t;
}

}  // namespace

TEST_SUITE("fluid") {

TEST_CASE("rhs examples") {
  const auto fixed = fluid_rhs(std::vector<double>{0.7, 0.0, 0.0}, 0.7);
  for (double d : fixed) CHECK(d == doctest::Approx(0.0));

  const auto empty = fluid_rhs(std::vector<double>{0.0, 0.0, 0.0}, 0.8);
  CHECK(empty[0] == doctest::Approx(0.8));
  CHECK(empty[1] == doctest::Approx(0.0));
  CHECK(empty[2] == doctest::Approx(0.0));

  const auto mid = fluid_rhs(std::vector<double>{1.0, 0.3, 0.0}, 0.9);
  CHECK(mid[0] == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(mid[1] == doctest::Approx(-0.1));
  CHECK(mid[2] == doctest::Approx(0.0));
}

TEST_CASE("rhs conserves mass flux") {
  // d/dt sum q_i = arrivals accepted - departures = lambda - q_1 when not truncated.
  for (const auto& q : {std::vector<double>{0.5, 0.1, 0.0, 0.0}, {1.0, 0.6, 0.2, 0.0},
                        {1.0, 1.0, 0.4, 0.0}, {0.2, 0.2, 0.0, 0.0}}) {
    const auto d = fluid_rhs(q, 0.95);
    double sum = 0.0;
    for (double x : d) sum += x;
    CHECK(sum == doctest::Approx(0.95 - q[0]));
  }
}

TEST_CASE("integration matches the closed form") {
  const auto traj = fluid_integrate(FluidVector(5, 0.0), 0.8, 10.0, 1e-3);
  double worst = 0.0;
  for (std::size_t s = 0; s < traj.times.size(); ++s) {
    worst = std::max(worst, std::abs(traj.states[s][0] - closed_form_q1(0.8, traj.times[s])));
    REQUIRE(traj.states[s][1] == 0.0);
  }
  CHECK(worst <= 1e-6);
  CHECK(traj.times.back() == doctest::Approx(10.0));
}

TEST_CASE("long-run endpoint is the fixed point") {
  for (double lambda : {0.3, 0.8, 0.95, 0.99}) {
    const auto traj = fluid_integrate(FluidVector(default_fluid_levels(lambda), 0.0), lambda, 50.0, 1e-2);
    CHECK(traj.states.back()[0] == doctest::Approx(lambda).epsilon(1e-4));
    CHECK(traj.states.back()[1] <= 1e-4);
  }
  // From a congested start.
  FluidVector q0{1.0, 0.8, 0.5, 0.2, 0.0, 0.0, 0.0, 0.0};
  const auto traj = fluid_integrate(q0, 0.9, 50.0, 1e-2);
  CHECK(std::abs(traj.states.back()[0] - 0.9) <= 1e-4);
  CHECK(traj.states.back()[1] <= 1e-4);
}

TEST_CASE("step halving changes little") {
  FluidVector q0{1.0, 0.5, 0.1, 0.0, 0.0, 0.0};
  const auto a = fluid_integrate(q0, 0.9, 5.0, 2e-3);
  const auto b = fluid_integrate(q0, 0.9, 5.0, 1e-3);
  for (std::size_t i = 0; i < q0.size(); ++i) CHECK(std::abs(a.states.back()[i] - b.states.back()[i]) <= 1e-3);
}

TEST_CASE("trajectory stays monotone and inside the unit box") {
  FluidVector q0{0.9, 0.9, 0.3, 0.1, 0.0, 0.0};
  const auto traj = fluid_integrate(q0, 0.97, 20.0, 1e-2, 0.1);
  for (const auto& s : traj.states) {
    REQUIRE(s[0] <= 1.0);
    for (std::size_t i = 1; i < s.size(); ++i) {
      REQUIRE(s[i] <= s[i - 1]);
      REQUIRE(s[i] >= 0.0);
    }
  }
  CHECK(traj.times.size() == 201);
}

TEST_CASE("projection") {
  std::vector<double> q{1.2, 0.5, 0.7, -0.1};
  project_fluid_state(q);
  CHECK(q == std::vector<double>{1.0, 0.5, 0.5, 0.0});
}

TEST_CASE("bipartite rhs and saturation time") {
  const auto r = bipartite_fluid_rhs(0.0, 0.0, 0.9, 0.3);
  CHECK(r.part_a == doctest::Approx(0.63));
  CHECK(r.part_b == doctest::Approx(0.27));
  const auto traj = bipartite_fluid_integrate(0.9, 0.3, 5.0, 1e-4);
  REQUIRE(traj.stopped);
  CHECK(std::abs(traj.stop_time - (-std::log(1.0 - 0.3 / 0.63))) <= 1e-3);
  for (std::size_t s = 0; s < traj.times.size(); ++s) {
    if (traj.times[s] > traj.stop_time) break;
    REQUIRE(std::abs(traj.q1a[s] - 0.63 * (1.0 - std::exp(-traj.times[s]))) <= 1e-6);
  }
  // Part A never saturates when lambda (1-c) <= c.
  CHECK_FALSE(bipartite_fluid_integrate(0.4, 0.3, 30.0, 1e-3).stopped);
}

TEST_CASE("suboptimality threshold") {
  CHECK(suboptimality_threshold(0.3) == doctest::Approx(0.7179).epsilon(1e-4));
  CHECK(suboptimality_threshold(0.49) == doctest::Approx(0.98664).epsilon(1e-4));
  CHECK(suboptimality_threshold(0.49) < 1.0);
  CHECK(suboptimality_threshold(1e-9) < 1e-4);
  for (double c : {0.05, 0.2, 0.35, 0.45}) {
    const double l = suboptimality_threshold(c);
    CHECK(l * l - c * l - c == doctest::Approx(0.0).epsilon(1e-12));
  }
}

TEST_CASE("diffusion scaling examples") {
  const auto full = diffusion_scale(one_sample(10000, {10000, 300, 0}), 10000, 9900.0, 3);
  CHECK(full.scaled[0][0] == doctest::Approx(0.0));
  CHECK(full.scaled[0][1] == doctest::Approx(3.0));
  CHECK(full.scaled[0][2] == doctest::Approx(0.0));
  CHECK(full.beta == doctest::Approx(1.0));
  const auto partial = diffusion_scale(one_sample(100, {90}), 100, 90.0, 2);
  CHECK(partial.scaled[0][0] == doctest::Approx(-1.0));
  CHECK(partial.scaled[0][1] == doctest::Approx(0.0));
}

TEST_CASE("clique simulation follows the fluid path") {
  // Mean path of three replications: a single path has sd about 0.009 in q_1.
  const Graph g = gen_clique(10000);
  std::vector<double> mean;
  std::vector<double> times;
  for (std::uint64_t r = 0; r < 3; ++r) {
    SimConfig cfg;
    cfg.lambda = 0.8;
    cfg.horizon = 10.0;
    cfg.grid = 0.05;
    cfg.seed = 31 + r;
    const Trace t = simulate(g, cfg);
    mean.resize(t.samples(), 0.0);
    times = t.times;
    for (std::size_t s = 0; s < t.samples(); ++s) mean[s] += t.q(s, 1) / 3.0;
  }
  double worst = 0.0;
  for (std::size_t s = 0; s < mean.size(); ++s)
    worst = std::max(worst, std::abs(mean[s] - closed_form_q1(0.8, times[s])));
  CHECK(worst <= 0.02);
}

TEST_CASE("simulated drift at a congested state agrees with the rhs") {
  // Start at q = (1, 0.3, 0) and measure the mean change over a short window.
  const std::size_t n = 2000;
  const double h = 0.1;
  std::vector<std::uint32_t> init(n, 1);
  for (std::size_t k = 0; k < 600; ++k) init[k] = 2;
  const Graph g = gen_clique(n);
  const int reps = 20;
  double d1 = 0.0, d2 = 0.0;
  for (int r = 0; r < reps; ++r) {
    SimConfig cfg;
    cfg.lambda = 0.9;
    cfg.horizon = h;
    cfg.grid = h;
    cfg.seed = 400 + static_cast<std::uint64_t>(r);
    cfg.initial = init;
    const Trace t = simulate(g, cfg);
    d1 += (t.q(t.samples() - 1, 1) - t.q(0, 1)) / h;
    d2 += (t.q(t.samples() - 1, 2) - t.q(0, 2)) / h;
  }
  CHECK(std::abs(d1 / reps - 0.0) <= 0.03);
  CHECK(std::abs(d2 / reps + 0.1) <= 0.03);
}

}
