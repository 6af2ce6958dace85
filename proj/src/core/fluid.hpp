#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "core/simulation.hpp"

namespace graphlb {

// q[0] = q_1, ..., q[K-1] = q_K with 1 >= q_1 >= ... >= q_K >= 0.
using FluidVector = std::vector<double>;

// Default truncation level 2 ceil(1/(1-lambda)) + 10.
std::size_t default_fluid_levels(double lambda);

// Clique JSQ fluid drift. Arrivals join the lowest level that is not full;
// once levels 1..m are saturated, the departure flux from level m+1 keeps
// level m topped up and the remainder spills one level higher.
FluidVector fluid_rhs(std::span<const double> q, double lambda);

// Clips to [0,1] and enforces monotonicity by a running minimum.
void project_fluid_state(std::span<double> q);

struct FluidTrajectory {
  std::vector<double> times;
  std::vector<FluidVector> states;
};

// Classical fixed-step RK4 with projection after each step. Samples every
// `sample_every` (rounded to whole steps; 0 means every step) and at T.
FluidTrajectory fluid_integrate(const FluidVector& q0, double lambda, double horizon, double dt,
                                double sample_every = 0.0);

struct BipartiteRates {
  double part_a = 0.0;
  double part_b = 0.0;
};

// Busy fractions (of N) in parts A and B of the complete bipartite graph
// before part A saturates.
BipartiteRates bipartite_fluid_rhs(double q1a, double q1b, double lambda, double c);

struct BipartiteTrajectory {
  std::vector<double> times;
  std::vector<double> q1a;
  std::vector<double> q1b;
  bool stopped = false;     // part A reached c within the horizon
  double stop_time = 0.0;   // interpolated crossing time
};

BipartiteTrajectory bipartite_fluid_integrate(double lambda, double c, double horizon, double dt);

// Load above which the complete bipartite sequence with part fraction c
// builds queues of length two: (c + sqrt(c^2 + 4c)) / 2.
double suboptimality_threshold(double c);

struct DiffusionSeries {
  std::size_t n = 0;
  double lambda_total = 0.0;
  double beta = 0.0;                            // (N - lambda(N)) / sqrt(N)
  std::vector<double> times;
  std::vector<std::vector<double>> scaled;      // scaled[s][i-1] = Qbar_i
};

// Qbar_1 = -(N - Q_1)/sqrt(N), Qbar_i = Q_i/sqrt(N) for i >= 2.
DiffusionSeries diffusion_scale(const Trace& trace, std::size_t n, double lambda_total,
                                std::size_t levels = 0);

}  // namespace graphlb
