#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <memory>
#include <mutex>
#include <span>
#include <vector>

#include "nucleus/cliques.hpp"
#include "nucleus/common.hpp"
#include "nucleus/graph.hpp"
#include "nucleus/hierarchy.hpp"
#include "nucleus/peel.hpp"
#include "nucleus/peel_approx.hpp"
#include "nucleus/union_find.hpp"

namespace nucleus {

// Dense per-clique levels shared by all builders: exact peeling uses the
// coreness values themselves, approximate peeling maps its assigned values
// to monotone integer ranks.
struct Levels {
  std::span<const std::int64_t> rank;
  std::span<const double> values;  // rank -> display value; empty = identity
  std::int64_t max_rank = 0;

  double value_of(std::int64_t rk) const {
    return values.empty() ? static_cast<double>(rk) : values[rk];
  }
};

inline Levels levels_of(const PeelResult& r) {
  return {{r.coreness.data(), r.coreness.size()}, {}, r.k_max};
}

inline Levels levels_of(const ApproxResult& r) {
  return {{r.level_rank.data(), r.level_rank.size()},
          {r.rank_values.data(), r.rank_values.size()},
          r.max_rank};
}

struct BuildCounters {
  std::int64_t unites = 0;
  std::int64_t links = 0;
  std::int64_t total() const { return unites + links; }
};

namespace detail {

// Per-level parent emission shared by the two-pass and basic builders:
// groups the active cliques by their union-find root and creates one parent
// whenever a component's membership joins at least two existing subtrees.
inline void emit_level_parents(const UnionFind& uf,
                               std::span<const cid> active, double level_value,
                               std::vector<cid>& cur_top, HierarchyTree& tree) {
  std::vector<std::pair<cid, cid>> by_root;
  by_root.reserve(active.size());
  for (cid R : active) by_root.emplace_back(uf.find(R), R);
  std::sort(by_root.begin(), by_root.end());
  std::vector<cid> tops;
  std::size_t i = 0;
  while (i < by_root.size()) {
    std::size_t j = i;
    tops.clear();
    while (j < by_root.size() && by_root[j].first == by_root[i].first) {
      tops.push_back(cur_top[by_root[j].second]);
      ++j;
    }
    std::sort(tops.begin(), tops.end());
    tops.erase(std::unique(tops.begin(), tops.end()), tops.end());
    if (tops.size() >= 2) {
      cid p = tree.add_parent(level_value, {tops.data(), tops.size()});
      for (std::size_t k = i; k < j; ++k) cur_top[by_root[k].second] = p;
    } else if (!tops.empty()) {
      for (std::size_t k = i; k < j; ++k) cur_top[by_root[k].second] = tops[0];
    }
    i = j;
  }
}

inline std::vector<std::vector<cid>> group_by_rank(std::span<const std::int64_t> rank,
                                                   std::int64_t max_rank) {
  std::vector<std::vector<cid>> by(max_rank + 1);
  for (cid R = 0; R < static_cast<cid>(rank.size()); ++R)
    by[rank[R]].push_back(R);
  return by;
}

}  // namespace detail

// Two-pass builder: given final levels, iterates them from the top down,
// re-enumerating each level's s-cliques from the static graph restricted to
// the cliques still at or above the level, and accumulating connectivity in
// one persistent union-find. Emits one new parent per component whose
// membership changed at the level.
inline HierarchyTree build_te(const OrientedGraph& og, const RCliqueIndex& idx,
                              int s, const Levels& lv,
                              BuildCounters* counters = nullptr,
                              const Deadline& deadline = {}) {
  const Graph& g = *og.base;
  const cid n_r = idx.size();
  std::vector<double> leaf_levels(n_r);
  for (cid R = 0; R < n_r; ++R) leaf_levels[R] = lv.value_of(lv.rank[R]);
  HierarchyTree tree =
      HierarchyTree::make_leaves(n_r, {leaf_levels.data(), leaf_levels.size()});

  auto by_rank = detail::group_by_rank(lv.rank, lv.max_rank);
  UnionFind uf(n_r);
  std::vector<cid> cur_top(n_r);
  for (cid R = 0; R < n_r; ++R) cur_top[R] = R;
  std::vector<cid> active;

  const std::int64_t* rank = lv.rank.data();
  for (std::int64_t i = lv.max_rank; i >= 1; --i) {
    deadline.check("build-te");
    const auto& members = by_rank[i];
    if (!members.empty()) {
#pragma omp parallel for schedule(dynamic, 8)
      for (std::int64_t mi = 0; mi < static_cast<std::int64_t>(members.size());
           ++mi) {
        const cid R = members[mi];
        for_each_s_clique_containing(
            g, idx, s, R, [&](cid o) { return rank[o] >= i; },
            [&](std::span<const cid> others) {
              for (cid o : others) uf.unite(R, o);
            });
      }
      active.insert(active.end(), members.begin(), members.end());
    }
    if (!active.empty() && !by_rank[i].empty())
      detail::emit_level_parents(uf, {active.data(), active.size()},
                                 lv.value_of(i), cur_top, tree);
  }
  if (counters) counters->unites += uf.unite_calls();
  return tree;
}

inline HierarchyTree build_te(const OrientedGraph& og, const RCliqueIndex& idx,
                              int s, const PeelResult& res,
                              BuildCounters* counters = nullptr) {
  return build_te(og, idx, s, levels_of(res), counters);
}

inline HierarchyTree build_te(const OrientedGraph& og, const RCliqueIndex& idx,
                              int s, const ApproxResult& res,
                              BuildCounters* counters = nullptr) {
  return build_te(og, idx, s, levels_of(res), counters);
}

// Basic interleaved builder: one union-find per level; every link unites the
// pair at all levels up to the smaller coreness. Memory grows as k * n_r,
// which is the documented hazard of this strategy on large inputs.
// level_bound caps the number of levels (any upper bound on k_max works,
// e.g. the maximum initial s-clique-degree); the per-level structures are
// only materialized once links actually reach a level.
class LinkBasicBuilder {
 public:
  LinkBasicBuilder(cid n_r, std::int64_t level_bound)
      : n_r_(n_r), ufs_(std::max<std::int64_t>(level_bound, 0)) {}

  // link(a, b): unite in uf_i for every level 1 <= i <= min(nd[a], nd[b])
  void link(cid a, cid b, const LevelView& nd) {
    links_.fetch_add(1, std::memory_order_relaxed);
    std::int64_t top = std::min(nd[a], nd[b]);
    if (top > allocated_.load(std::memory_order_acquire)) reserve_levels(top);
    for (std::int64_t i = 1; i <= top; ++i) ufs_[i - 1]->unite(a, b);
  }

  HierarchyTree build(const Levels& lv) const {
    std::vector<double> leaf_levels(n_r_);
    for (cid R = 0; R < n_r_; ++R) leaf_levels[R] = lv.value_of(lv.rank[R]);
    HierarchyTree tree = HierarchyTree::make_leaves(
        n_r_, {leaf_levels.data(), leaf_levels.size()});
    auto by_rank = detail::group_by_rank(lv.rank, lv.max_rank);
    std::vector<cid> cur_top(n_r_);
    for (cid R = 0; R < n_r_; ++R) cur_top[R] = R;
    std::vector<cid> active;
    const std::int64_t avail = allocated_.load(std::memory_order_acquire);
    for (std::int64_t i = lv.max_rank; i >= 1; --i) {
      active.insert(active.end(), by_rank[i].begin(), by_rank[i].end());
      if (active.empty() || i > avail) continue;
      detail::emit_level_parents(*ufs_[i - 1], {active.data(), active.size()},
                                 lv.value_of(i), cur_top, tree);
    }
    return tree;
  }

  // levels with no unions yet are absent; callers asking for them get null
  const UnionFind* level_uf(std::int64_t i) const {
    if (i < 1 || i > allocated_.load(std::memory_order_acquire)) return nullptr;
    return ufs_[i - 1].get();
  }

  BuildCounters counters() const {
    BuildCounters c;
    c.links = links_.load(std::memory_order_relaxed);
    const std::int64_t avail = allocated_.load(std::memory_order_acquire);
    for (std::int64_t i = 0; i < avail; ++i) c.unites += ufs_[i]->unite_calls();
    return c;
  }

  std::int64_t bytes() const {
    std::int64_t b = 0;
    const std::int64_t avail = allocated_.load(std::memory_order_acquire);
    for (std::int64_t i = 0; i < avail; ++i) b += ufs_[i]->bytes();
    return b;
  }

 private:
  void reserve_levels(std::int64_t top) {
    std::lock_guard<std::mutex> guard(grow_mutex_);
    std::int64_t have = allocated_.load(std::memory_order_relaxed);
    if (top > static_cast<std::int64_t>(ufs_.size()))
      throw protocol_error("link level exceeds the configured bound");
    for (std::int64_t i = have; i < top; ++i)
      ufs_[i] = std::make_unique<UnionFind>(n_r_);
    if (top > have) allocated_.store(top, std::memory_order_release);
  }

  cid n_r_;
  std::vector<std::unique_ptr<UnionFind>> ufs_;
  std::atomic<std::int64_t> allocated_{0};
  std::mutex grow_mutex_;
  std::atomic<std::int64_t> links_{0};
};

// Efficient interleaved builder: a single union-find connecting equal-level
// cliques plus the nearest-lower-core table L. Cascading updates propagate
// connectivity discovered through already-peeled cliques; entries in L are
// only ever replaced by strictly higher-level cliques, so retries make
// progress. Stale entries for non-roots are left in place and resolved
// through find() on use.
class LinkEfficientBuilder {
 public:
  // levels must outlive the builder and be frozen for every id passed to
  // link; the interleaved framework guarantees both.
  LinkEfficientBuilder(cid n_r, std::span<const std::int64_t> levels)
      : uf_(n_r), nd_(levels), l_(std::vector<std::atomic<cid>>(n_r)) {
    for (auto& e : l_) e.store(kNone, std::memory_order_relaxed);
  }

  void link(cid r0, cid q0, const LevelView&) { link(r0, q0); }

  void link(cid r0, cid q0) {
    std::vector<std::pair<cid, cid>> work;
    work.emplace_back(r0, q0);
    while (!work.empty()) {
      auto [R, Q] = work.back();
      work.pop_back();
      links_.fetch_add(1, std::memory_order_relaxed);
      if (R == kNone || Q == kNone) continue;
      if (nd_[Q] < nd_[R]) std::swap(R, Q);
      R = uf_.find(R);
      Q = uf_.find(Q);
      if (nd_[R] == nd_[Q]) {
        uf_.unite(R, Q);
        if (cid pr = uf_.find(R); pr != R)
          work.emplace_back(l_[R].load(std::memory_order_acquire), pr);
        if (cid pq = uf_.find(Q); pq != Q)
          work.emplace_back(l_[Q].load(std::memory_order_acquire), pq);
        continue;
      }
      // nd[R] < nd[Q]: R is a candidate nearest lower core for Q's set
      while (true) {
        cid lq = l_[Q].load(std::memory_order_acquire);
        Q = uf_.find(Q);
        if (lq == kNone) {
          cid expect = kNone;
          if (l_[Q].compare_exchange_strong(expect, R,
                                            std::memory_order_acq_rel)) {
            if (cid pq = uf_.find(Q); pq != Q) work.emplace_back(R, pq);
            break;
          }
          continue;
        }
        if (nd_[lq] < nd_[R]) {
          cid expect = lq;
          if (l_[Q].compare_exchange_strong(expect, R,
                                            std::memory_order_acq_rel)) {
            if (cid pq = uf_.find(Q); pq != Q) work.emplace_back(R, pq);
            work.emplace_back(R, lq);  // displaced entry keeps its connection
            break;
          }
          continue;
        }
        work.emplace_back(R, l_[Q].load(std::memory_order_acquire));
        break;
      }
    }
  }

  const UnionFind& uf() const { return uf_; }
  cid l_entry(cid id) const { return l_[id].load(std::memory_order_acquire); }
  void preset_l(cid id, cid value) {
    l_[id].store(value, std::memory_order_relaxed);
  }

  // One parent per union-find component over its leaves, each attached under
  // the parent owning the component of its nearest lower core. A nearest
  // core whose level fails to strictly decrease indicates a protocol bug and
  // is reported rather than looped on.
  HierarchyTree build(const Levels& lv) const {
    const cid n_r = uf_.size();
    std::vector<double> leaf_levels(n_r);
    for (cid R = 0; R < n_r; ++R) leaf_levels[R] = lv.value_of(lv.rank[R]);
    HierarchyTree tree = HierarchyTree::make_leaves(
        n_r, {leaf_levels.data(), leaf_levels.size()});

    std::vector<std::pair<cid, cid>> by_root(n_r);
    for (cid R = 0; R < n_r; ++R) by_root[R] = {uf_.find(R), R};
    std::sort(by_root.begin(), by_root.end());
    std::vector<cid> comp_parent(n_r, kNone);
    std::vector<cid> members;
    std::size_t i = 0;
    while (i < by_root.size()) {
      std::size_t j = i;
      members.clear();
      while (j < by_root.size() && by_root[j].first == by_root[i].first)
        members.push_back(by_root[j++].second);
      comp_parent[by_root[i].first] = tree.add_parent(
          lv.value_of(lv.rank[by_root[i].first]),
          {members.data(), members.size()});
      i = j;
    }
    for (cid root = 0; root < n_r; ++root) {
      if (comp_parent[root] == kNone) continue;
      cid lq = l_[root].load(std::memory_order_relaxed);
      if (lq == kNone) continue;
      cid target = uf_.find(lq);
      if (!(nd_[target] < nd_[root]))
        throw protocol_error(
            "nearest-core entry does not decrease level; cycle among parents");
      tree.parent[comp_parent[root]] = comp_parent[target];
    }
    return tree;
  }

  BuildCounters counters() const {
    return {uf_.unite_calls(), links_.load(std::memory_order_relaxed)};
  }

  std::int64_t bytes() const {
    return uf_.bytes() +
           static_cast<std::int64_t>(l_.size() * sizeof(std::atomic<cid>) +
                                     nd_.size() * sizeof(std::int64_t));
  }

 private:
  mutable UnionFind uf_;
  std::span<const std::int64_t> nd_;
  mutable std::vector<std::atomic<cid>> l_;
  std::atomic<std::int64_t> links_{0};
};

// Single-level connectivity recomputed from scratch: the baseline a stored
// hierarchy is measured against, and the reference for cut() equality.
inline std::vector<std::vector<cid>> recompute_nuclei(
    const OrientedGraph& og, const RCliqueIndex& idx, int s,
    std::span<const std::int64_t> rank, std::int64_t c) {
  const Graph& g = *og.base;
  const cid n_r = idx.size();
  UnionFind uf(n_r);
  std::vector<cid> active;
  for (cid R = 0; R < n_r; ++R)
    if (rank[R] >= c) active.push_back(R);
  const std::int64_t* rk = rank.data();
#pragma omp parallel for schedule(dynamic, 8)
  for (std::int64_t ai = 0; ai < static_cast<std::int64_t>(active.size());
       ++ai) {
    const cid R = active[ai];
    for_each_s_clique_containing(
        g, idx, s, R, [&](cid o) { return rk[o] >= c; },
        [&](std::span<const cid> others) {
          for (cid o : others) uf.unite(R, o);
        });
  }
  std::vector<std::pair<cid, cid>> by_root;
  by_root.reserve(active.size());
  for (cid R : active) by_root.emplace_back(uf.find(R), R);
  std::sort(by_root.begin(), by_root.end());
  std::vector<std::vector<cid>> out;
  std::size_t i = 0;
  while (i < by_root.size()) {
    std::size_t j = i;
    out.emplace_back();
    while (j < by_root.size() && by_root[j].first == by_root[i].first)
      out.back().push_back(by_root[j++].second);
    i = j;
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace nucleus
