#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "core/fenwick.hpp"
#include "core/graph.hpp"

namespace graphlb {

class Rng;

// Buffer capacity b; kInfiniteBuffer means unbounded queues.
inline constexpr std::uint32_t kInfiniteBuffer = std::numeric_limits<std::uint32_t>::max();

// Per-server queue lengths X_k together with the occupancy counts
// Q_i = #{k : X_k >= i}. Optionally keeps per-level id-ordered indexes that
// answer "k-th server in nondecreasing (queue length, id) order" in
// O(levels + log N).
class OccupancyState {
 public:
  OccupancyState(std::size_t n_servers, bool track_order);
  // Starts from the given queue lengths.
  OccupancyState(std::span<const std::uint32_t> lengths, bool track_order);

  std::size_t size() const noexcept { return x_.size(); }
  std::uint32_t length(Vertex k) const { return x_[k]; }
  std::span<const std::uint32_t> lengths() const noexcept { return x_; }

  // Q_i for i >= 1; zero above the current maximum level.
  std::uint64_t at_least(std::size_t i) const {
    return i < q_.size() ? q_[i] : 0;
  }
  // Q_1..Q_L where L is the highest level currently occupied.
  std::span<const std::uint64_t> occupancy() const {
    return std::span<const std::uint64_t>(q_).subspan(1, top_);
  }
  std::size_t top_level() const noexcept { return top_; }
  std::uint64_t busy() const noexcept { return at_least(1); }
  std::uint64_t total_tasks() const noexcept { return total_; }

  void add_task(Vertex k);
  void remove_task(Vertex k);

  // Uniformly random server with X_k >= 1. Requires busy() > 0.
  Vertex random_busy(Rng& rng) const;

  bool tracks_order() const noexcept { return track_order_; }
  // Servers with queue length strictly below `level`.
  std::uint64_t count_below(std::uint32_t level) const;
  // 1-based rank in nondecreasing (X, id) order. Requires order tracking.
  Vertex kth_ordered(std::uint64_t rank) const;

  // Full recount against X; returns an empty string when consistent.
  std::string check_invariants() const;

 private:
  void ensure_level(std::size_t level);

  std::vector<std::uint32_t> x_;
  std::vector<std::uint64_t> q_;        // q_[i] = Q_i, q_[0] = N
  std::size_t top_ = 0;
  std::uint64_t total_ = 0;
  std::vector<Vertex> busy_list_;
  std::vector<std::uint32_t> busy_pos_;
  bool track_order_ = false;
  std::vector<Fenwick> level_index_;    // level_index_[l] marks servers at level l
};

}  // namespace graphlb
