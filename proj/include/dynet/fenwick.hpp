#pragma once

#include <cstddef>
#include <vector>

namespace dynet {

/// Fenwick tree over nonnegative double weights with O(log n) point update,
/// prefix sum and weighted sampling. Supports appending new slots.
class FenwickTree {
  public:
    FenwickTree() = default;
    explicit FenwickTree(std::size_t n) : tree_(n + 1, 0.0), weight_(n, 0.0) {}

    std::size_t size() const { return weight_.size(); }

    void push_back(double w) {
        std::size_t i = weight_.size();
        weight_.push_back(0.0);
        tree_.push_back(0.0);
        // new tree cell starts as the sum of the range it covers
        std::size_t idx = i + 1;
        std::size_t lsb = idx & (~idx + 1);
        double s = 0.0;
        for (std::size_t j = idx - 1; j > idx - lsb; j -= j & (~j + 1)) s += tree_[j];
        tree_[idx] = s;
        if (w != 0.0) add(i, w);
    }

    void add(std::size_t i, double delta) {
        weight_[i] += delta;
        for (std::size_t j = i + 1; j < tree_.size(); j += j & (~j + 1)) tree_[j] += delta;
    }

    void set(std::size_t i, double w) { add(i, w - weight_[i]); }

    double weight(std::size_t i) const { return weight_[i]; }

    /// Sum of weights [0, i).
    double prefix(std::size_t i) const {
        double s = 0.0;
        for (std::size_t j = i; j > 0; j -= j & (~j + 1)) s += tree_[j];
        return s;
    }

    double total() const { return prefix(size()); }

    /// Smallest index with prefix(i+1) > x; callers draw x uniform in [0, total).
    std::size_t sample(double x) const {
        std::size_t idx = 0;
        std::size_t mask = 1;
        while ((mask << 1) < tree_.size()) mask <<= 1;
        for (; mask != 0; mask >>= 1) {
            std::size_t next = idx + mask;
            if (next < tree_.size() && tree_[next] <= x) {
                idx = next;
                x -= tree_[next];
            }
        }
        return idx;  // 0-based slot
    }

  private:
    std::vector<double> tree_;    // 1-based
    std::vector<double> weight_;  // exact per-slot weights
};

}  // namespace dynet
