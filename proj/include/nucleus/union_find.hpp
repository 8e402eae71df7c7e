#pragma once

#include <atomic>
#include <cstdint>
#include <vector>

#include "nucleus/common.hpp"

namespace nucleus {

// Concurrent disjoint-set forest. unite/find may run from many threads;
// linking always hangs the larger root under the smaller, so the
// representative of a set is the minimum id in it regardless of schedule.
// Path halving uses CAS so concurrent finds stay safe.
class UnionFind {
 public:
  explicit UnionFind(cid n = 0) { reset(n); }

  void reset(cid n) {
    parent_ = std::vector<std::atomic<cid>>(n);
    for (cid i = 0; i < n; ++i)
      parent_[i].store(i, std::memory_order_relaxed);
    unites_.store(0, std::memory_order_relaxed);
  }

  cid size() const { return static_cast<cid>(parent_.size()); }

  cid find(cid x) const {
    while (true) {
      cid p = parent_[x].load(std::memory_order_acquire);
      if (p == x) return x;
      cid gp = parent_[p].load(std::memory_order_acquire);
      if (gp == p) return p;
      parent_[x].compare_exchange_weak(p, gp, std::memory_order_acq_rel);
      x = gp;
    }
  }

  // Returns the surviving root.
  cid unite(cid a, cid b) {
    unites_.fetch_add(1, std::memory_order_relaxed);
    while (true) {
      cid ra = find(a);
      cid rb = find(b);
      if (ra == rb) return ra;
      cid lo = ra < rb ? ra : rb;
      cid hi = ra < rb ? rb : ra;
      cid expect = hi;
      if (parent_[hi].compare_exchange_strong(expect, lo,
                                              std::memory_order_acq_rel))
        return lo;
      // lost the race; roots moved, retry
    }
  }

  bool same(cid a, cid b) const { return find(a) == find(b); }

  std::int64_t unite_calls() const {
    return unites_.load(std::memory_order_relaxed);
  }

  std::int64_t bytes() const {
    return static_cast<std::int64_t>(parent_.size() * sizeof(std::atomic<cid>));
  }

 private:
  mutable std::vector<std::atomic<cid>> parent_;
  std::atomic<std::int64_t> unites_{0};
};

}  // namespace nucleus
