#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <vector>

namespace graphlb {

// Binary indexed tree over 0/1 (or small count) entries with order-statistic
// select.
class Fenwick {
 public:
  Fenwick() = default;
  explicit Fenwick(std::size_t n) : tree_(n + 1, 0) {}

  // All entries set to one, built in linear time.
  static Fenwick ones(std::size_t n) {
    Fenwick f(n);
    for (std::size_t i = 1; i <= n; ++i) {
      f.tree_[i] += 1;
      const std::size_t parent = i + (i & (~i + 1));
      if (parent <= n) f.tree_[parent] += f.tree_[i];
    }
    return f;
  }

  std::size_t size() const { return tree_.empty() ? 0 : tree_.size() - 1; }

  void add(std::size_t index, std::int64_t delta) {
    for (std::size_t i = index + 1; i < tree_.size(); i += i & (~i + 1)) {
      tree_[i] += delta;
    }
  }

  // Sum over [0, index).
  std::int64_t prefix(std::size_t index) const {
    std::int64_t s = 0;
    for (std::size_t i = index; i > 0; i -= i & (~i + 1)) s += tree_[i];
    return s;
  }

  // Smallest index whose inclusive prefix sum reaches `rank` (1-based).
  std::size_t select(std::int64_t rank) const {
    std::size_t pos = 0;
    const std::size_t n = size();
    for (std::size_t step = std::bit_floor(n == 0 ? std::size_t{1} : n);
         step > 0; step >>= 1) {
      const std::size_t next = pos + step;
      if (next <= n && tree_[next] < rank) {
        pos = next;
        rank -= tree_[next];
      }
    }
    return pos;
  }

 private:
  std::vector<std::int64_t> tree_;
};

}  // namespace graphlb
