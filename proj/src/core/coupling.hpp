#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "core/graph.hpp"
#include "core/simulation.hpp"

namespace graphlb {

// Where the graph-chosen server v' is placed among servers with equal queue
// length when testing whether it falls inside the n+1 lowest.
enum class TieRule {
  kEarliest,  // after all strictly shorter queues, before its equals
  kLatest,    // after all of its equals
};

std::string_view tie_rule_name(TieRule r);
std::optional<TieRule> parse_tie_rule(std::string_view name);

struct CoupledTrace {
  Trace graph_system;
  Trace hybrid_system;
  std::vector<std::uint64_t> delta;      // cumulative violations per sample
  std::vector<std::int64_t> bound_gap;   // sum_i |Q_i(G)-Q_i(I)| - 2 delta per sample
  std::int64_t max_bound_gap = 0;        // maximum of the gap over every event
  std::uint64_t events = 0;
  std::uint64_t arrivals = 0;

  std::uint64_t final_delta() const { return delta.empty() ? 0 : delta.back(); }
};

// Runs the graph system and the hybrid I(G, n) system off one event stream.
// Arrival epochs are shared per vertex; departure clocks are shared per
// ordered position (rate N in total). cfg.policy is ignored.
CoupledTrace simulate_coupled(const Graph& g, const SimConfig& cfg, std::size_t n,
                              TieRule tie_rule = TieRule::kEarliest);

}  // namespace graphlb
