#include "core/fluid.hpp"

#include <algorithm>
#include <cmath>

#include "core/error.hpp"

namespace graphlb {

std::size_t default_fluid_levels(double lambda) {
  require(lambda > 0.0 && lambda < 1.0, "fluid truncation needs 0 < lambda < 1");
  return 2 * static_cast<std::size_t>(std::ceil(1.0 / (1.0 - lambda))) + 10;
}

FluidVector fluid_rhs(std::span<const double> q, double lambda) {
  const std::size_t k = q.size();
  auto at = [&](std::size_t i) { return i == 0 ? 1.0 : (i <= k ? q[i - 1] : 0.0); };

  // m = min{i >= 0 : q_{i+1} < 1}
  std::size_t m = 0;
  while (m < k && at(m + 1) >= 1.0) ++m;

  // p[j] = fraction of arrivals joining servers with exactly j tasks.
  std::vector<double> p(k + 1, 0.0);
  if (m == 0) {
    p[0] = 1.0;
  } else {
    const double lower = std::min((1.0 - at(m + 1)) / lambda, 1.0);
    p[m - 1] = lower;
    if (m <= k) p[m] = 1.0 - lower;
  }
  FluidVector dq(k);
  for (std::size_t i = 1; i <= k; ++i) {
    dq[i - 1] = lambda * p[i - 1] - (at(i) - at(i + 1));
  }
  return dq;
}

void project_fluid_state(std::span<double> q) {
  double running = 1.0;
  for (double& v : q) {
    v = std::clamp(v, 0.0, 1.0);
    running = std::min(running, v);
    v = running;
  }
}

FluidTrajectory fluid_integrate(const FluidVector& q0, double lambda, double horizon, double dt,
                                double sample_every) {
  require(dt > 0.0, "dt must be positive");
  require(horizon >= 0.0, "horizon must be nonnegative");
  require(lambda > 0.0, "lambda must be positive");
  const auto steps = static_cast<std::size_t>(std::llround(horizon / dt));
  const std::size_t stride =
      sample_every <= 0.0 ? 1 : std::max<std::size_t>(1, std::llround(sample_every / dt));

  FluidTrajectory out;
  FluidVector q = q0;
  project_fluid_state(q);
  out.times.push_back(0.0);
  out.states.push_back(q);

  const std::size_t k = q.size();
  FluidVector tmp(k);
  for (std::size_t step = 1; step <= steps; ++step) {
    const FluidVector k1 = fluid_rhs(q, lambda);
    for (std::size_t i = 0; i < k; ++i) tmp[i] = q[i] + 0.5 * dt * k1[i];
    const FluidVector k2 = fluid_rhs(tmp, lambda);
    for (std::size_t i = 0; i < k; ++i) tmp[i] = q[i] + 0.5 * dt * k2[i];
    const FluidVector k3 = fluid_rhs(tmp, lambda);
    for (std::size_t i = 0; i < k; ++i) tmp[i] = q[i] + dt * k3[i];
    const FluidVector k4 = fluid_rhs(tmp, lambda);
    for (std::size_t i = 0; i < k; ++i) {
      q[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }
    project_fluid_state(q);
    if (step % stride == 0 || step == steps) {
      out.times.push_back(static_cast<double>(step) * dt);
      out.states.push_back(q);
    }
  }
  return out;
}

BipartiteRates bipartite_fluid_rhs(double q1a, double q1b, double lambda, double c) {
  require(c > 0.0 && c < 0.5, "bipartite fluid needs 0 < c < 1/2");
  return {lambda * (1.0 - c) - q1a, lambda * c - q1b};
}

BipartiteTrajectory bipartite_fluid_integrate(double lambda, double c, double horizon,
                                              double dt) {
  require(c > 0.0 && c < 0.5, "bipartite fluid needs 0 < c < 1/2");
  require(dt > 0.0 && horizon >= 0.0, "invalid integration grid");
  BipartiteTrajectory out;
  double a = 0.0;
  double b = 0.0;
  out.times.push_back(0.0);
  out.q1a.push_back(a);
  out.q1b.push_back(b);
  const auto steps = static_cast<std::size_t>(std::llround(horizon / dt));
  for (std::size_t step = 1; step <= steps; ++step) {
    auto f = [&](double x, double y) { return bipartite_fluid_rhs(x, y, lambda, c); };
    const auto k1 = f(a, b);
    const auto k2 = f(a + 0.5 * dt * k1.part_a, b + 0.5 * dt * k1.part_b);
    const auto k3 = f(a + 0.5 * dt * k2.part_a, b + 0.5 * dt * k2.part_b);
    const auto k4 = f(a + dt * k3.part_a, b + dt * k3.part_b);
    const double na = a + dt / 6.0 * (k1.part_a + 2 * k2.part_a + 2 * k3.part_a + k4.part_a);
    const double nb = b + dt / 6.0 * (k1.part_b + 2 * k2.part_b + 2 * k3.part_b + k4.part_b);
    const double t = static_cast<double>(step) * dt;
    if (na >= c) {
      const double frac = (c - a) / (na - a);
      out.stopped = true;
      out.stop_time = t - dt + frac * dt;
      out.times.push_back(out.stop_time);
      out.q1a.push_back(c);
      out.q1b.push_back(b + frac * (nb - b));
      return out;
    }
    a = na;
    b = nb;
    out.times.push_back(t);
    out.q1a.push_back(a);
    out.q1b.push_back(b);
  }
  return out;
}

double suboptimality_threshold(double c) {
  require(c > 0.0 && c < 0.5, "threshold needs 0 < c < 1/2");
  return (c + std::sqrt(c * c + 4.0 * c)) / 2.0;
}

DiffusionSeries diffusion_scale(const Trace& trace, std::size_t n, double lambda_total,
                                std::size_t levels) {
  require(n >= 1, "N must be positive");
  DiffusionSeries out;
  out.n = n;
  out.lambda_total = lambda_total;
  const double root = std::sqrt(static_cast<double>(n));
  out.beta = (static_cast<double>(n) - lambda_total) / root;
  if (levels == 0) levels = std::max<std::size_t>(trace.levels(), 2);
  out.times = trace.times;
  for (std::size_t s = 0; s < trace.samples(); ++s) {
    std::vector<double> row(levels);
    for (std::size_t i = 1; i <= levels; ++i) {
      const auto q = static_cast<double>(trace.count(s, i));
      row[i - 1] = i == 1 ? -(static_cast<double>(n) - q) / root : q / root;
    }
    out.scaled.push_back(std::move(row));
  }
  return out;
}

}  // namespace graphlb
