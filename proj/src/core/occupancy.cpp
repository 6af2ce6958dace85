#include "core/occupancy.hpp"

#include "core/error.hpp"
#include "core/rng.hpp"

namespace graphlb {

namespace {
constexpr std::uint32_t kNotBusy = std::numeric_limits<std::uint32_t>::max();
}

OccupancyState::OccupancyState(std::size_t n_servers, bool track_order)
    : x_(n_servers, 0),
      q_(1, n_servers),
      busy_pos_(n_servers, kNotBusy),
      track_order_(track_order) {
  require(n_servers >= 1, "need at least one server");
  if (track_order_) level_index_.push_back(Fenwick::ones(n_servers));
}

OccupancyState::OccupancyState(std::span<const std::uint32_t> lengths, bool track_order)
    : OccupancyState(lengths.size(), track_order) {
  for (Vertex k = 0; k < lengths.size(); ++k) {
    for (std::uint32_t j = 0; j < lengths[k]; ++j) add_task(k);
  }
}

void OccupancyState::ensure_level(std::size_t level) {
  if (q_.size() <= level) q_.resize(level + 1, 0);
  if (track_order_) {
    while (level_index_.size() <= level) level_index_.emplace_back(x_.size());
  }
}

void OccupancyState::add_task(Vertex k) {
  const std::uint32_t from = x_[k];
  const std::uint32_t to = from + 1;
  ensure_level(to);
  x_[k] = to;
  ++q_[to];
  ++total_;
  if (to > top_) top_ = to;
  if (from == 0) {
    busy_pos_[k] = static_cast<std::uint32_t>(busy_list_.size());
    busy_list_.push_back(k);
  }
  if (track_order_) {
    level_index_[from].add(k, -1);
    level_index_[to].add(k, +1);
  }
}

void OccupancyState::remove_task(Vertex k) {
  const std::uint32_t from = x_[k];
  if (from == 0) fail(ErrorCode::kInternal, "departure from an empty server");
  const std::uint32_t to = from - 1;
  x_[k] = to;
  --q_[from];
  --total_;
  while (top_ > 0 && q_[top_] == 0) --top_;
  if (to == 0) {
    const std::uint32_t pos = busy_pos_[k];
    const Vertex last = busy_list_.back();
    busy_list_[pos] = last;
    busy_pos_[last] = pos;
    busy_list_.pop_back();
    busy_pos_[k] = kNotBusy;
  }
  if (track_order_) {
    level_index_[from].add(k, -1);
    level_index_[to].add(k, +1);
  }
}

Vertex OccupancyState::random_busy(Rng& rng) const {
  return busy_list_[rng.below(busy_list_.size())];
}

std::uint64_t OccupancyState::count_below(std::uint32_t level) const {
  if (level == 0) return 0;
  return x_.size() - at_least(level);
}

Vertex OccupancyState::kth_ordered(std::uint64_t rank) const {
  if (!track_order_) fail(ErrorCode::kInternal, "order tracking is disabled");
  if (rank < 1 || rank > x_.size()) fail(ErrorCode::kInternal, "rank out of range");
  std::uint64_t before = 0;
  for (std::size_t level = 0;; ++level) {
    const std::uint64_t here = at_least(level) - at_least(level + 1);
    if (before + here >= rank) {
      return static_cast<Vertex>(
          level_index_[level].select(static_cast<std::int64_t>(rank - before)));
    }
    before += here;
  }
}

std::string OccupancyState::check_invariants() const {
  std::vector<std::uint64_t> recount(q_.size(), 0);
  std::uint64_t total = 0;
  std::uint64_t busy = 0;
  for (std::uint32_t len : x_) {
    if (len >= recount.size()) return "queue length above tracked levels";
    for (std::uint32_t i = 1; i <= len; ++i) ++recount[i];
    total += len;
    busy += len > 0 ? 1 : 0;
  }
  for (std::size_t i = 1; i < q_.size(); ++i) {
    if (recount[i] != q_[i]) return "Q_" + std::to_string(i) + " mismatch";
    if (q_[i] > q_[i - 1]) return "Q not monotone at level " + std::to_string(i);
  }
  if (total != total_) return "task total mismatch";
  if (busy != busy_list_.size() || busy != at_least(1)) return "busy count mismatch";
  if (top_ + 1 < q_.size() && q_[top_ + 1] != 0) return "top level stale";
  if (track_order_) {
    for (std::size_t level = 0; level < level_index_.size(); ++level) {
      const std::uint64_t here = at_least(level) - at_least(level + 1);
      if (static_cast<std::uint64_t>(level_index_[level].prefix(x_.size())) != here) {
        return "order index mismatch at level " + std::to_string(level);
      }
    }
  }
  return {};
}

}  // namespace graphlb
