#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <span>
#include <vector>

namespace ltlab::util {

// Fenwick tree over value ranks; prefix(i) = sum of the first i slots.
template <typename T>
class Fenwick {
 public:
  explicit Fenwick(std::size_t n) : tree_(n + 1, T{}) {}

  void add(std::size_t slot, T delta) {
    for (std::size_t i = slot + 1; i < tree_.size(); i += i & (~i + 1))
      tree_[i] += delta;
  }

  // Sum of slots [0, count).
  T prefix(std::size_t count) const {
    T s{};
    for (std::size_t i = std::min(count, tree_.size() - 1); i > 0;
         i -= i & (~i + 1))
      s += tree_[i];
    return s;
  }

  void reset() { std::fill(tree_.begin(), tree_.end(), T{}); }

 private:
  std::vector<T> tree_;
};

// Rank structure over a fixed collection of values (one slot per element,
// duplicates keep distinct slots ordered by original index). Window counts
// reduce to rank differences, so a windowed count over values inserted so
// far is two Fenwick prefix queries against ranks computed here.
class ValueIndex {
 public:
  explicit ValueIndex(std::span<const double> values)
      : sorted_(values.begin(), values.end()), slot_(values.size()) {
    std::vector<std::uint32_t> order(values.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::uint32_t a, std::uint32_t b) {
                       return values[a] < values[b];
                     });
    for (std::size_t pos = 0; pos < order.size(); ++pos) {
      sorted_[pos] = values[order[pos]];
      slot_[order[pos]] = static_cast<std::uint32_t>(pos);
    }
  }

  std::size_t size() const { return sorted_.size(); }

  // Slot of the element with the given original index.
  std::size_t slot_of(std::size_t original_index) const {
    return slot_[original_index];
  }

  // Number of slots with value < v / <= v.
  std::size_t rank_lt(double v) const {
    return static_cast<std::size_t>(
        std::lower_bound(sorted_.begin(), sorted_.end(), v) - sorted_.begin());
  }
  std::size_t rank_le(double v) const {
    return static_cast<std::size_t>(
        std::upper_bound(sorted_.begin(), sorted_.end(), v) - sorted_.begin());
  }

 private:
  std::vector<double> sorted_;
  std::vector<std::uint32_t> slot_;
};

}  // namespace ltlab::util
