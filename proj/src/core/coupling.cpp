#include "core/coupling.hpp"

#include <cstdlib>

#include "core/error.hpp"

namespace graphlb {

std::string_view tie_rule_name(TieRule r) {
  return r == TieRule::kEarliest ? "earliest" : "latest";
}

std::optional<TieRule> parse_tie_rule(std::string_view name) {
  if (name == "earliest") return TieRule::kEarliest;
  if (name == "latest") return TieRule::kLatest;
  return std::nullopt;
}

namespace {

std::int64_t occupancy_distance(const OccupancyState& a, const OccupancyState& b) {
  const std::size_t top = std::max(a.top_level(), b.top_level());
  std::int64_t sum = 0;
  for (std::size_t i = 1; i <= top; ++i) {
    sum += std::llabs(static_cast<std::int64_t>(a.at_least(i)) -
                      static_cast<std::int64_t>(b.at_least(i)));
  }
  return sum;
}

void accept(OccupancyState& state, detail::TraceRecorder& recorder, Vertex k) {
  const std::uint32_t old = state.length(k);
  state.add_task(k);
  recorder.on_level_change(k, old, old + 1);
}

void depart(OccupancyState& state, detail::TraceRecorder& recorder, Vertex k) {
  const std::uint32_t old = state.length(k);
  state.remove_task(k);
  recorder.on_departure();
  recorder.on_level_change(k, old, old - 1);
}

}  // namespace

CoupledTrace simulate_coupled(const Graph& g, const SimConfig& cfg, std::size_t n,
                              TieRule tie_rule) {
  const std::size_t size = g.vertex_count();
  require(size >= 1, "graph has no vertices");
  require(n + 1 <= size, "coupling needs n + 1 <= N");
  require(cfg.lambda > 0.0 && cfg.horizon > 0.0 && cfg.grid > 0.0, "invalid run parameters");
  require(cfg.buffer >= 1, "buffer must be at least one");
  require(cfg.initial.empty() || cfg.initial.size() == size, "initial state has wrong length");

  OccupancyState gs = cfg.initial.empty() ? OccupancyState(size, true)
                                          : OccupancyState(cfg.initial, true);
  OccupancyState is = gs;
  detail::TraceRecorder grec(gs, cfg.lambda, cfg.grid, cfg.horizon, cfg.group, false);
  detail::TraceRecorder irec(is, cfg.lambda, cfg.grid, cfg.horizon, cfg.group, false);

  CoupledTrace out;
  std::uint64_t delta = 0;
  auto gap = [&] {
    return occupancy_distance(gs, is) - 2 * static_cast<std::int64_t>(delta);
  };
  out.max_bound_gap = gap();
  out.delta.push_back(0);
  out.bound_gap.push_back(out.max_bound_gap);
  grec.set_sample_hook([&](double) {
    out.delta.push_back(delta);
    out.bound_gap.push_back(gap());
  });

  Rng rng(cfg.seed, Stream::kCoupling);
  const double arrival_rate = cfg.lambda * static_cast<double>(size);
  const double total = arrival_rate + static_cast<double>(size);
  const std::uint32_t buffer = cfg.buffer;
  auto full = [buffer](const OccupancyState& s, Vertex k) {
    return buffer != kInfiniteBuffer && s.length(k) >= buffer;
  };

  double t = 0.0;
  while (true) {
    const double next = t + rng.exponential(total);
    if (next > cfg.horizon) break;
    grec.advance_to(next);
    irec.advance_to(next);
    t = next;
    ++out.events;

    if (rng.uniform() * total < arrival_rate) {
      ++out.arrivals;
      const auto v = static_cast<Vertex>(rng.below(size));
      grec.on_arrival();
      irec.on_arrival();

      const std::optional<Vertex> chosen = assign_graph_jsq(g, gs, v, rng, buffer);
      // Position of the graph's choice in the graph system's (X, tie) order.
      const std::uint32_t level =
          chosen ? gs.length(*chosen) : buffer;  // a discard happens at level b
      const std::uint64_t position =
          tie_rule == TieRule::kEarliest ? gs.count_below(level) + 1 : gs.count_below(level + 1);
      if (chosen) {
        accept(gs, grec, *chosen);
      } else {
        grec.on_discard();
      }

      Vertex hybrid_target;
      if (position <= n + 1) {
        hybrid_target = is.kth_ordered(position);
      } else {
        ++delta;
        hybrid_target = is.kth_ordered(rng.below(n + 1) + 1);
      }
      if (full(is, hybrid_target)) {
        irec.on_discard();
      } else {
        accept(is, irec, hybrid_target);
      }
    } else {
      const std::uint64_t rank = rng.below(size) + 1;
      const Vertex gk = gs.kth_ordered(rank);
      if (gs.length(gk) > 0) depart(gs, grec, gk);
      const Vertex ik = is.kth_ordered(rank);
      if (is.length(ik) > 0) depart(is, irec, ik);
    }
    out.max_bound_gap = std::max(out.max_bound_gap, gap());
  }
  out.graph_system = grec.finish();
  out.hybrid_system = irec.finish();
  return out;
}

}  // namespace graphlb
