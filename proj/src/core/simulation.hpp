#pragma once

#include <cstdint>
#include <deque>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "core/graph.hpp"
#include "core/occupancy.hpp"
#include "core/rng.hpp"

namespace graphlb {

enum class Policy {
  kGraphJsq,   // shortest queue within the closed neighborhood of the arrival vertex
  kCjsq,       // uniform among the n+1 globally shortest queues
  kIsolated,   // every task stays at its arrival vertex
};

std::string_view policy_name(Policy p);
std::optional<Policy> parse_policy(std::string_view name);

struct SimConfig {
  double lambda = 0.9;                       // arrival rate per server
  std::uint32_t buffer = kInfiniteBuffer;    // b
  double horizon = 100.0;                    // T
  std::uint64_t seed = 0;
  Policy policy = Policy::kGraphJsq;
  std::size_t cjsq_n = 0;                    // n for kCjsq
  double grid = 0.5;                         // sample spacing
  std::vector<std::uint32_t> initial;        // empty means all servers idle
  bool record_waits = false;                 // FCFS per-task waiting times
  std::vector<Vertex> group;                 // optional subset tracked on its own
  bool debug_checks = false;                 // full recount every 10^4 events
};

// Time-integrated occupancy over one sample interval [begin, end).
struct TraceCell {
  double begin = 0.0;
  double end = 0.0;
  std::vector<double> area;       // area[i-1] = integral of Q_i
  double wait_sum = 0.0;          // waits of tasks entering service in the cell
  std::uint64_t wait_count = 0;
};

// Piecewise-constant occupancy trajectory sampled on a grid plus the horizon.
struct Trace {
  std::size_t n_servers = 0;
  double lambda = 0.0;
  std::vector<double> times;
  std::vector<std::vector<std::uint64_t>> occupancy;        // Q_1..Q_L per sample
  std::vector<std::vector<std::uint64_t>> group_occupancy;  // same, restricted to the group
  std::size_t group_size = 0;
  std::vector<std::uint64_t> arrivals;                      // cumulative per sample
  std::vector<std::uint64_t> departures;
  std::vector<std::uint64_t> discards;
  std::vector<TraceCell> cells;
  std::uint64_t in_system_end = 0;
  bool waits_recorded = false;

  std::size_t samples() const { return times.size(); }
  // Highest level present at any sample.
  std::size_t levels() const;
  std::uint64_t count(std::size_t sample, std::size_t level) const;
  double q(std::size_t sample, std::size_t level) const {
    return static_cast<double>(count(sample, level)) / static_cast<double>(n_servers);
  }
  std::uint64_t group_count(std::size_t sample, std::size_t level) const;
};

// Shortest queue within N[v], ties uniform. nullopt means the task is
// discarded because every server in N[v] holds `buffer` tasks.
std::optional<Vertex> assign_graph_jsq(const Graph& g, const OccupancyState& state, Vertex v,
                                       Rng& rng, std::uint32_t buffer = kInfiniteBuffer);

// Uniform among the n+1 servers ranked lowest by (queue length, id).
Vertex assign_cjsq(const OccupancyState& state, std::size_t n, Rng& rng);

Trace simulate(const Graph& g, const SimConfig& cfg);

struct StationarySummary {
  double warmup = 0.0;
  double duration = 0.0;
  std::size_t batches = 0;
  std::vector<double> mean_q;                  // mean_q[i-1] = time average of q_i
  std::vector<double> se_q;
  std::vector<std::vector<double>> batch_q;    // per batch, per level
  double wait_little = 0.0;                    // lambda^-1 sum_{i>=2} mean q_i
  double wait_little_se = 0.0;
  bool has_fcfs = false;
  double wait_fcfs = 0.0;
  double wait_fcfs_se = 0.0;

  // Time average of sum_{i>=m} q_i and its batch-means standard error.
  double tail_mean(std::size_t m) const;
  double tail_se(std::size_t m) const;
};

inline constexpr std::size_t kDefaultBatches = 20;

// Time averages over [warmup, horizon] with batch-means standard errors.
StationarySummary stationary_stats(const Trace& trace, double warmup,
                                   std::size_t batches = kDefaultBatches);

// Sample mean and standard error of the mean.
std::pair<double, double> mean_and_se(const std::vector<double>& values);

namespace detail {

// Shared sampling machinery for the single and coupled event loops.
class TraceRecorder {
 public:
  TraceRecorder(const OccupancyState& state, double lambda, double grid, double horizon,
                const std::vector<Vertex>& group, bool waits);

  // Integrates the (unchanged) state up to `t`, emitting grid samples on the way.
  void advance_to(double t);
  void on_arrival() { ++arrivals_; }
  void on_discard() { ++discards_; }
  void on_departure() { ++departures_; }
  void on_level_change(Vertex k, std::uint32_t old_level, std::uint32_t new_level);
  void tally_wait(double w);
  // Called with the sample time whenever a sample is emitted.
  void set_sample_hook(std::function<void(double)> hook) { hook_ = std::move(hook); }
  Trace finish();

 private:
  void emit_sample(double t);
  void integrate(double t);
  void close_cell(double t);

  const OccupancyState& state_;
  double grid_;
  double horizon_;
  std::size_t next_index_ = 1;
  double now_ = 0.0;
  std::vector<char> in_group_;
  std::vector<std::uint64_t> group_q_;
  TraceCell cell_;
  std::uint64_t arrivals_ = 0;
  std::uint64_t departures_ = 0;
  std::uint64_t discards_ = 0;
  std::function<void(double)> hook_;
  Trace trace_;
};

// FCFS bookkeeping: per-server arrival times of queued tasks.
class WaitTracker {
 public:
  WaitTracker(std::size_t n, std::span<const std::uint32_t> initial);
  // Returns the wait of the task if it enters service immediately.
  std::optional<double> arrive(Vertex k, double t);
  // Returns the wait of the next task entering service at k, if any.
  std::optional<double> depart(Vertex k, double t);

 private:
  std::vector<std::deque<double>> queues_;
};

}  // namespace detail

}  // namespace graphlb
