#include "core/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "core/error.hpp"

namespace graphlb {

std::string_view policy_name(Policy p) {
  switch (p) {
    case Policy::kGraphJsq: return "graph_jsq";
    case Policy::kCjsq: return "cjsq_n";
    case Policy::kIsolated: return "isolated";
  }
  return "unknown";
}

std::optional<Policy> parse_policy(std::string_view name) {
  if (name == "graph_jsq") return Policy::kGraphJsq;
  if (name == "cjsq_n" || name == "cjsq") return Policy::kCjsq;
  if (name == "isolated") return Policy::kIsolated;
  return std::nullopt;
}

std::size_t Trace::levels() const {
  std::size_t best = 0;
  for (const auto& row : occupancy) best = std::max(best, row.size());
  return best;
}

std::uint64_t Trace::count(std::size_t sample, std::size_t level) const {
  const auto& row = occupancy[sample];
  return level >= 1 && level <= row.size() ? row[level - 1] : 0;
}

std::uint64_t Trace::group_count(std::size_t sample, std::size_t level) const {
  const auto& row = group_occupancy[sample];
  return level >= 1 && level <= row.size() ? row[level - 1] : 0;
}

std::optional<Vertex> assign_graph_jsq(const Graph& g, const OccupancyState& state, Vertex v,
                                       Rng& rng, std::uint32_t buffer) {
  auto nb = g.neighbors(v);
  std::uint32_t best = state.length(v);
  std::uint64_t ties = 1;
  Vertex first = v;
  for (Vertex u : nb) {
    const std::uint32_t len = state.length(u);
    if (len < best) {
      best = len;
      ties = 1;
      first = u;
    } else if (len == best) {
      ++ties;
    }
  }
  if (buffer != kInfiniteBuffer && best >= buffer) return std::nullopt;
  if (ties == 1) return first;
  std::uint64_t pick = rng.below(ties);
  if (state.length(v) == best) {
    if (pick == 0) return v;
    --pick;
  }
  for (Vertex u : nb) {
    if (state.length(u) == best) {
      if (pick == 0) return u;
      --pick;
    }
  }
  fail(ErrorCode::kInternal, "tie selection fell through");
}

Vertex assign_cjsq(const OccupancyState& state, std::size_t n, Rng& rng) {
  require(n + 1 <= state.size(), "cjsq needs n + 1 <= N");
  return state.kth_ordered(rng.below(n + 1) + 1);
}

namespace detail {

TraceRecorder::TraceRecorder(const OccupancyState& state, double lambda, double grid,
                             double horizon, const std::vector<Vertex>& group, bool waits)
    : state_(state), grid_(grid), horizon_(horizon) {
  trace_.n_servers = state.size();
  trace_.lambda = lambda;
  trace_.waits_recorded = waits;
  if (!group.empty()) {
    in_group_.assign(state.size(), 0);
    for (Vertex k : group) {
      require(k < state.size(), "group member out of range");
      in_group_[k] = 1;
    }
    trace_.group_size = static_cast<std::size_t>(
        std::count(in_group_.begin(), in_group_.end(), char{1}));
    group_q_.assign(1, 0);
    for (Vertex k = 0; k < state.size(); ++k) {
      if (!in_group_[k]) continue;
      const std::uint32_t len = state.length(k);
      if (group_q_.size() <= len) group_q_.resize(len + 1, 0);
      for (std::uint32_t i = 1; i <= len; ++i) ++group_q_[i];
    }
  }
  cell_.begin = 0.0;
  emit_sample(0.0);
}

void TraceRecorder::emit_sample(double t) {
  trace_.times.push_back(t);
  auto occ = state_.occupancy();
  trace_.occupancy.emplace_back(occ.begin(), occ.end());
  if (!in_group_.empty()) {
    std::size_t top = group_q_.size() - 1;
    while (top > 0 && group_q_[top] == 0) --top;
    trace_.group_occupancy.emplace_back(group_q_.begin() + 1,
                                        group_q_.begin() + 1 + static_cast<std::ptrdiff_t>(top));
  }
  trace_.arrivals.push_back(arrivals_);
  trace_.departures.push_back(departures_);
  trace_.discards.push_back(discards_);
  if (hook_) hook_(t);
}

void TraceRecorder::integrate(double t) {
  const double dt = t - now_;
  if (dt > 0.0) {
    const std::size_t top = state_.top_level();
    if (cell_.area.size() < top) cell_.area.resize(top, 0.0);
    for (std::size_t i = 1; i <= top; ++i) {
      cell_.area[i - 1] += static_cast<double>(state_.at_least(i)) * dt;
    }
  }
  now_ = t;
}

void TraceRecorder::close_cell(double t) {
  cell_.end = t;
  trace_.cells.push_back(std::move(cell_));
  cell_ = TraceCell{};
  cell_.begin = t;
}

void TraceRecorder::advance_to(double t) {
  while (true) {
    const double g = static_cast<double>(next_index_) * grid_;
    if (g > t || g >= horizon_ * (1.0 - 1e-12)) break;
    integrate(g);
    close_cell(g);
    emit_sample(g);
    ++next_index_;
  }
  integrate(t);
}

void TraceRecorder::on_level_change(Vertex k, std::uint32_t old_level,
                                    std::uint32_t new_level) {
  if (in_group_.empty() || !in_group_[k]) return;
  if (new_level > old_level) {
    if (group_q_.size() <= new_level) group_q_.resize(new_level + 1, 0);
    ++group_q_[new_level];
  } else {
    --group_q_[old_level];
  }
}

void TraceRecorder::tally_wait(double w) {
  cell_.wait_sum += w;
  ++cell_.wait_count;
}

Trace TraceRecorder::finish() {
  advance_to(horizon_);
  close_cell(horizon_);
  emit_sample(horizon_);
  trace_.in_system_end = state_.total_tasks();
  return std::move(trace_);
}

WaitTracker::WaitTracker(std::size_t n, std::span<const std::uint32_t> initial) : queues_(n) {
  for (std::size_t k = 0; k < initial.size(); ++k) queues_[k].assign(initial[k], 0.0);
}

std::optional<double> WaitTracker::arrive(Vertex k, double t) {
  queues_[k].push_back(t);
  if (queues_[k].size() == 1) return 0.0;
  return std::nullopt;
}

std::optional<double> WaitTracker::depart(Vertex k, double t) {
  queues_[k].pop_front();
  if (queues_[k].empty()) return std::nullopt;
  return t - queues_[k].front();
}

}  // namespace detail

namespace {

void validate(const Graph& g, const SimConfig& cfg) {
  require(g.vertex_count() >= 1, "graph has no vertices");
  require(cfg.lambda > 0.0 && std::isfinite(cfg.lambda), "lambda must be positive");
  require(cfg.horizon > 0.0 && std::isfinite(cfg.horizon), "horizon must be positive");
  require(cfg.grid > 0.0, "sample grid must be positive");
  require(cfg.buffer >= 1, "buffer must be at least one");
  if (cfg.policy == Policy::kCjsq) {
    require(cfg.cjsq_n < g.vertex_count(), "cjsq needs n < N");
  }
  if (!cfg.initial.empty()) {
    require(cfg.initial.size() == g.vertex_count(), "initial state has wrong length");
    for (std::uint32_t len : cfg.initial) {
      require(cfg.buffer == kInfiniteBuffer || len <= cfg.buffer,
              "initial queue exceeds the buffer");
    }
  }
}

}  // namespace

Trace simulate(const Graph& g, const SimConfig& cfg) {
  validate(g, cfg);
  const std::size_t n = g.vertex_count();
  const bool track_order = cfg.policy == Policy::kCjsq;
  OccupancyState state = cfg.initial.empty() ? OccupancyState(n, track_order)
                                             : OccupancyState(cfg.initial, track_order);
  Rng rng(cfg.seed, Stream::kSimulation);
  detail::TraceRecorder recorder(state, cfg.lambda, cfg.grid, cfg.horizon, cfg.group,
                                 cfg.record_waits);
  std::optional<detail::WaitTracker> waits;
  if (cfg.record_waits) waits.emplace(n, cfg.initial);

  const double arrival_rate = cfg.lambda * static_cast<double>(n);
  double t = 0.0;
  std::uint64_t events = 0;
  while (true) {
    const double departure_rate = static_cast<double>(state.busy());
    const double total = arrival_rate + departure_rate;
    const double next = t + rng.exponential(total);
    if (next > cfg.horizon) break;
    recorder.advance_to(next);
    t = next;

    if (rng.uniform() * total < arrival_rate) {
      const auto v = static_cast<Vertex>(rng.below(n));
      recorder.on_arrival();
      std::optional<Vertex> target;
      switch (cfg.policy) {
        case Policy::kGraphJsq:
          target = assign_graph_jsq(g, state, v, rng, cfg.buffer);
          break;
        case Policy::kCjsq:
          target = assign_cjsq(state, cfg.cjsq_n, rng);
          break;
        case Policy::kIsolated:
          target = v;
          break;
      }
      if (target && cfg.buffer != kInfiniteBuffer && state.length(*target) >= cfg.buffer) {
        target.reset();
      }
      if (!target) {
        recorder.on_discard();
      } else {
        const std::uint32_t old = state.length(*target);
        state.add_task(*target);
        recorder.on_level_change(*target, old, old + 1);
        if (waits) {
          if (auto w = waits->arrive(*target, t)) recorder.tally_wait(*w);
        }
      }
    } else {
      const Vertex k = state.random_busy(rng);
      const std::uint32_t old = state.length(k);
      state.remove_task(k);
      recorder.on_departure();
      recorder.on_level_change(k, old, old - 1);
      if (waits) {
        if (auto w = waits->depart(k, t)) recorder.tally_wait(*w);
      }
    }

    if (cfg.debug_checks && ++events % 10'000 == 0) {
      const std::string problem = state.check_invariants();
      if (!problem.empty()) fail(ErrorCode::kInternal, "occupancy invariant: " + problem);
    }
  }
  return recorder.finish();
}

std::pair<double, double> mean_and_se(const std::vector<double>& values) {
  if (values.empty()) return {0.0, 0.0};
  const double m = std::accumulate(values.begin(), values.end(), 0.0) /
                   static_cast<double>(values.size());
  if (values.size() < 2) return {m, 0.0};
  double ss = 0.0;
  for (double v : values) ss += (v - m) * (v - m);
  const double var = ss / static_cast<double>(values.size() - 1);
  return {m, std::sqrt(var / static_cast<double>(values.size()))};
}

double StationarySummary::tail_mean(std::size_t m) const {
  double s = 0.0;
  for (std::size_t i = std::max<std::size_t>(m, 1); i <= mean_q.size(); ++i) s += mean_q[i - 1];
  return s;
}

double StationarySummary::tail_se(std::size_t m) const {
  std::vector<double> per_batch;
  per_batch.reserve(batch_q.size());
  for (const auto& row : batch_q) {
    double s = 0.0;
    for (std::size_t i = std::max<std::size_t>(m, 1); i <= row.size(); ++i) s += row[i - 1];
    per_batch.push_back(s);
  }
  return mean_and_se(per_batch).second;
}

StationarySummary stationary_stats(const Trace& trace, double warmup, std::size_t batches) {
  require(batches >= 2, "need at least two batches");
  require(!trace.times.empty() && warmup < trace.times.back(), "warmup must be below the horizon");
  std::size_t first = 0;
  while (first < trace.cells.size() && trace.cells[first].begin < warmup - 1e-9) ++first;
  const std::size_t available = trace.cells.size() - first;
  if (available < batches) {
    fail(ErrorCode::kInvalidArgument,
         "warmup leaves " + std::to_string(available) + " sample intervals, fewer than " +
             std::to_string(batches) + " batches");
  }
  const std::size_t per_batch = available / batches;
  first += available - per_batch * batches;  // drop the oldest leftovers

  std::size_t levels = 0;
  for (std::size_t c = first; c < trace.cells.size(); ++c) {
    levels = std::max(levels, trace.cells[c].area.size());
  }

  StationarySummary s;
  s.warmup = trace.cells[first].begin;
  s.duration = trace.cells.back().end - s.warmup;
  s.batches = batches;
  s.has_fcfs = trace.waits_recorded;
  const auto n = static_cast<double>(trace.n_servers);

  std::vector<double> total_area(levels, 0.0);
  double total_wait = 0.0;
  std::uint64_t total_wait_count = 0;
  std::vector<double> little_batches, fcfs_batches;
  for (std::size_t b = 0; b < batches; ++b) {
    std::vector<double> area(levels, 0.0);
    double span = 0.0;
    double wait = 0.0;
    std::uint64_t wait_count = 0;
    for (std::size_t c = first + b * per_batch; c < first + (b + 1) * per_batch; ++c) {
      const auto& cell = trace.cells[c];
      span += cell.end - cell.begin;
      for (std::size_t i = 0; i < cell.area.size(); ++i) area[i] += cell.area[i];
      wait += cell.wait_sum;
      wait_count += cell.wait_count;
    }
    std::vector<double> q(levels);
    for (std::size_t i = 0; i < levels; ++i) {
      q[i] = area[i] / (n * span);
      total_area[i] += area[i];
    }
    little_batches.push_back(
        std::accumulate(q.begin() + std::min<std::size_t>(1, levels), q.end(), 0.0) / trace.lambda);
    if (s.has_fcfs) {
      fcfs_batches.push_back(wait_count ? wait / static_cast<double>(wait_count) : 0.0);
      total_wait += wait;
      total_wait_count += wait_count;
    }
    s.batch_q.push_back(std::move(q));
  }

  s.mean_q.resize(levels);
  s.se_q.resize(levels);
  for (std::size_t i = 0; i < levels; ++i) {
    s.mean_q[i] = total_area[i] / (n * s.duration);
    std::vector<double> column;
    for (const auto& row : s.batch_q) column.push_back(row[i]);
    s.se_q[i] = mean_and_se(column).second;
  }
  s.wait_little = s.tail_mean(2) / trace.lambda;
  s.wait_little_se = mean_and_se(little_batches).second;
  if (s.has_fcfs) {
    s.wait_fcfs = total_wait_count ? total_wait / static_cast<double>(total_wait_count) : 0.0;
    s.wait_fcfs_se = mean_and_se(fcfs_batches).second;
  }
  return s;
}

}  // namespace graphlb
