#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "nucleus/common.hpp"
#include "nucleus/graph.hpp"

#if defined(_OPENMP)
#include <omp.h>
#endif

namespace nucleus {

namespace detail {

inline std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

inline std::uint64_t hash_tuple(std::span<const vid> t) {
  std::uint64_t h = 0x2545f4914f6cdd1dull;
  for (vid v : t) h = mix64(h ^ static_cast<std::uint64_t>(v));
  return h;
}

// sorted_a ∩ N-filter helper: intersection of two sorted ranges into out
inline void intersect_sorted(std::span<const vid> a, std::span<const vid> b,
                             std::vector<vid>& out) {
  out.clear();
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(),
                        std::back_inserter(out));
}

}  // namespace detail

// Bijection between canonical r-cliques (strictly sorted vertex tuples) and
// dense ids in [0, n_r). Ids follow the lexicographic order of the tuples:
// r=1 ids are vertex ids, r=2 ids are the rank of (u,v) in the sorted edge
// array, r>=3 ids rank the sorted tuple list built by enumeration.
class RCliqueIndex {
 public:
  RCliqueIndex() = default;

  int r() const { return r_; }
  cid size() const { return n_r_; }

  std::span<const vid> verts_of(cid id) const {
    return {verts_.data() + static_cast<std::size_t>(id) * r_,
            static_cast<std::size_t>(r_)};
  }

  // tuple must be strictly sorted ascending; returns kNone if absent
  cid id_of(std::span<const vid> tuple) const {
    if (static_cast<int>(tuple.size()) != r_) return kNone;
    if (r_ == 1) return tuple[0] < n_r_ ? tuple[0] : kNone;
    if (r_ == 2) return edge_id(tuple[0], tuple[1]);
    const std::uint64_t mask = table_.size() - 1;
    std::uint64_t slot = detail::hash_tuple(tuple) & mask;
    while (true) {
      cid c = table_[slot];
      if (c == kNone) return kNone;
      if (std::equal(tuple.begin(), tuple.end(), verts_of(c).begin()))
        return c;
      slot = (slot + 1) & mask;
    }
  }

  cid edge_id(vid u, vid v) const {
    if (u > v) std::swap(u, v);
    auto lo = up_adj_.begin() + up_offset_[u];
    auto hi = up_adj_.begin() + up_offset_[u + 1];
    auto it = std::lower_bound(lo, hi, v);
    if (it == hi || *it != v) return kNone;
    return up_offset_[u] + (it - lo);
  }

  std::int64_t bytes() const {
    return static_cast<std::int64_t>(verts_.size() * sizeof(vid) +
                                     table_.size() * sizeof(cid) +
                                     up_offset_.size() * sizeof(std::int64_t) +
                                     up_adj_.size() * sizeof(vid));
  }

  friend RCliqueIndex index_r_cliques(const OrientedGraph& og, int r);

 private:
  int r_ = 0;
  cid n_r_ = 0;
  std::vector<vid> verts_;              // n_r * r
  std::vector<cid> table_;              // open addressing (r >= 3)
  std::vector<std::int64_t> up_offset_;  // r == 2: CSR over (u, v>u) pairs
  std::vector<vid> up_adj_;
};

namespace detail {

// Enumerates every k-clique of the undirected graph exactly once by
// recursive intersection over out-neighbor lists of the orientation.
// emit receives the clique with vertices in rank order (not id order).
template <class F>
void k_cliques_from(const OrientedGraph& og, int k, std::vector<vid>& stack,
                    std::vector<std::vector<vid>>& scratch,
                    std::span<const vid> cand, F&& emit) {
  const int depth = static_cast<int>(stack.size());
  if (depth == k) {
    emit(std::span<const vid>(stack.data(), stack.size()));
    return;
  }
  if (static_cast<int>(cand.size()) < k - depth) return;
  if (depth == k - 1) {
    for (vid w : cand) {
      stack.push_back(w);
      emit(std::span<const vid>(stack.data(), stack.size()));
      stack.pop_back();
    }
    return;
  }
  auto& next = scratch[depth];
  for (std::size_t i = 0; i < cand.size(); ++i) {
    vid w = cand[i];
    intersect_sorted(cand.subspan(i + 1), og.out_neighbors(w), next);
    std::vector<vid> keep = std::move(next);
    next = {};
    stack.push_back(w);
    k_cliques_from(og, k, stack, scratch,
                   std::span<const vid>(keep.data(), keep.size()), emit);
    stack.pop_back();
    next = std::move(keep);
  }
}

}  // namespace detail

// Parallel over top-level vertices; emit must be thread-safe.
template <class F>
void for_each_k_clique(const OrientedGraph& og, int k, F&& emit) {
  const Graph& g = *og.base;
  if (k == 1) {
    for (vid v = 0; v < g.n; ++v) {
      vid one[1] = {v};
      emit(std::span<const vid>(one, 1));
    }
    return;
  }
#pragma omp parallel
  {
    std::vector<vid> stack;
    std::vector<std::vector<vid>> scratch(k);
#pragma omp for schedule(dynamic, 64)
    for (vid v = 0; v < g.n; ++v) {
      stack.clear();
      stack.push_back(v);
      detail::k_cliques_from(og, k, stack, scratch, og.out_neighbors(v), emit);
    }
  }
}

inline std::int64_t count_k_cliques(const OrientedGraph& og, int k) {
  std::atomic<std::int64_t> total{0};
  for_each_k_clique(og, k, [&](std::span<const vid>) {
    total.fetch_add(1, std::memory_order_relaxed);
  });
  return total.load();
}

inline RCliqueIndex index_r_cliques(const OrientedGraph& og, int r) {
  if (r < 1) throw config_error("r must be >= 1");
  const Graph& g = *og.base;
  RCliqueIndex idx;
  idx.r_ = r;
  if (r == 1) {
    idx.n_r_ = g.n;
    idx.verts_.resize(g.n);
    for (vid v = 0; v < g.n; ++v) idx.verts_[v] = v;
    return idx;
  }
  if (r == 2) {
    idx.n_r_ = g.m;
    idx.up_offset_.assign(g.n + 1, 0);
    for (vid u = 0; u < g.n; ++u) {
      auto nb = g.neighbors(u);
      idx.up_offset_[u + 1] =
          nb.end() - std::upper_bound(nb.begin(), nb.end(), u);
    }
    for (vid u = 0; u < g.n; ++u) idx.up_offset_[u + 1] += idx.up_offset_[u];
    idx.up_adj_.resize(g.m);
    idx.verts_.resize(static_cast<std::size_t>(g.m) * 2);
    for (vid u = 0; u < g.n; ++u) {
      std::int64_t c = idx.up_offset_[u];
      for (vid v : g.neighbors(u))
        if (v > u) {
          idx.up_adj_[c] = v;
          idx.verts_[2 * c] = u;
          idx.verts_[2 * c + 1] = v;
          ++c;
        }
    }
    return idx;
  }

  // r >= 3: enumerate, canonicalize, sort, then hash for lookup
  std::vector<std::vector<vid>> per_thread;
#pragma omp parallel
  {
#pragma omp single
    per_thread.resize(
#if defined(_OPENMP)
        omp_get_num_threads()
#else
        1
#endif
    );
  }
  for_each_k_clique(og, r, [&](std::span<const vid> c) {
#if defined(_OPENMP)
    auto& buf = per_thread[omp_get_thread_num()];
#else
    auto& buf = per_thread[0];
#endif
    std::size_t base = buf.size();
    buf.insert(buf.end(), c.begin(), c.end());
    std::sort(buf.begin() + base, buf.end());
  });
  std::size_t total = 0;
  for (auto& b : per_thread) total += b.size();
  idx.n_r_ = static_cast<cid>(total / r);
  std::vector<cid> order(idx.n_r_);
  idx.verts_.reserve(total);
  for (auto& b : per_thread) {
    idx.verts_.insert(idx.verts_.end(), b.begin(), b.end());
    b.clear();
    b.shrink_to_fit();
  }
  for (cid i = 0; i < idx.n_r_; ++i) order[i] = i;
  const vid* vp = idx.verts_.data();
  const int rr = r;
  std::sort(order.begin(), order.end(), [vp, rr](cid a, cid b) {
    return std::lexicographical_compare(vp + a * rr, vp + (a + 1) * rr,
                                        vp + b * rr, vp + (b + 1) * rr);
  });
  std::vector<vid> sorted(idx.verts_.size());
  for (cid i = 0; i < idx.n_r_; ++i)
    std::copy(vp + order[i] * rr, vp + (order[i] + 1) * rr,
              sorted.begin() + i * rr);
  idx.verts_ = std::move(sorted);

  std::size_t cap = 16;
  while (cap < static_cast<std::size_t>(idx.n_r_) * 2) cap <<= 1;
  idx.table_.assign(cap, kNone);
  const std::uint64_t mask = cap - 1;
  for (cid i = 0; i < idx.n_r_; ++i) {
    std::uint64_t slot = detail::hash_tuple(idx.verts_of(i)) & mask;
    while (idx.table_[slot] != kNone) slot = (slot + 1) & mask;
    idx.table_[slot] = i;
  }
  return idx;
}

// Current s-clique-degree per r-clique id, plus the total s-clique count.
struct SCliqueCounts {
  int s = 0;
  std::int64_t n_s = 0;
  std::vector<std::int64_t> counts;

  std::int64_t bytes() const {
    return static_cast<std::int64_t>(counts.size() * sizeof(std::int64_t));
  }
};

namespace detail {

// Applies fn to the id of every r-subset of the sorted s-clique verts.
template <class F>
void for_each_r_subset_id(const RCliqueIndex& idx, std::span<const vid> verts,
                          F&& fn) {
  const int s = static_cast<int>(verts.size());
  const int r = idx.r();
  int pick[8];
  for (int i = 0; i < r; ++i) pick[i] = i;
  vid tuple[8];
  while (true) {
    for (int i = 0; i < r; ++i) tuple[i] = verts[pick[i]];
    fn(idx.id_of(std::span<const vid>(tuple, r)));
    int i = r - 1;
    while (i >= 0 && pick[i] == s - r + i) --i;
    if (i < 0) break;
    ++pick[i];
    for (int j = i + 1; j < r; ++j) pick[j] = pick[j - 1] + 1;
  }
}

}  // namespace detail

// Exact s-clique-degree of every r-clique. Internally parallel; counts are
// accumulated with atomics so results are independent of thread count.
inline SCliqueCounts count_s_per_r(const OrientedGraph& og,
                                   const RCliqueIndex& idx, int s) {
  if (s <= idx.r()) throw config_error("require r < s");
  if (s > 8) throw config_error("s is limited to 8");
  SCliqueCounts sc;
  sc.s = s;
  sc.counts.assign(idx.size(), 0);
  std::atomic<std::int64_t> ns{0};
  auto* counts = sc.counts.data();
  for_each_k_clique(og, s, [&](std::span<const vid> c) {
    ns.fetch_add(1, std::memory_order_relaxed);
    vid sorted[8];
    std::copy(c.begin(), c.end(), sorted);
    std::sort(sorted, sorted + c.size());
    detail::for_each_r_subset_id(
        idx, std::span<const vid>(sorted, c.size()), [&](cid id) {
#pragma omp atomic
          counts[id] += 1;
        });
  });
  sc.n_s = ns.load();
  return sc;
}

// Enumerates every s-clique of the static graph containing the r-clique R,
// each exactly once. visit receives the ids of the other C(s,r)-1 r-cliques
// of the s-clique. Safe to call concurrently for distinct R.
template <class F>
void for_each_s_clique_containing(const Graph& g, const RCliqueIndex& idx,
                                  int s, cid R, F&& visit) {
  const int r = idx.r();
  auto rv = idx.verts_of(R);
  // common neighborhood of the r base vertices
  std::vector<vid> cand(g.neighbors(rv[0]).begin(), g.neighbors(rv[0]).end());
  std::vector<vid> tmp;
  for (int i = 1; i < r; ++i) {
    detail::intersect_sorted({cand.data(), cand.size()}, g.neighbors(rv[i]),
                             tmp);
    cand.swap(tmp);
  }
  const int extend = s - r;
  std::vector<vid> chosen;
  std::vector<cid> others;
  vid verts[8];
  auto emit = [&]() {
    std::copy(rv.begin(), rv.end(), verts);
    std::copy(chosen.begin(), chosen.end(), verts + r);
    std::sort(verts, verts + s);
    others.clear();
    detail::for_each_r_subset_id(idx, std::span<const vid>(verts, s),
                                 [&](cid id) {
                                   if (id != R) others.push_back(id);
                                 });
    visit(std::span<const cid>(others.data(), others.size()));
  };
  // choose increasing pairwise-adjacent extensions within cand
  std::vector<std::vector<vid>> levels(extend);
  auto rec = [&](auto&& self, std::span<const vid> pool, int depth) -> void {
    if (depth == extend) {
      emit();
      return;
    }
    for (std::size_t i = 0; i < pool.size(); ++i) {
      vid w = pool[i];
      chosen.push_back(w);
      if (depth + 1 == extend) {
        emit();
      } else {
        auto& next = levels[depth];
        detail::intersect_sorted(pool.subspan(i + 1), g.neighbors(w), next);
        std::vector<vid> keep = std::move(next);
        levels[depth] = {};
        self(self, {keep.data(), keep.size()}, depth + 1);
        levels[depth] = std::move(keep);
      }
      chosen.pop_back();
    }
  };
  if (extend == 0) return;
  rec(rec, {cand.data(), cand.size()}, 0);
}

// Residual-graph variant: visits only s-cliques whose other member r-cliques
// all satisfy live.
template <class Live, class F>
void for_each_s_clique_containing(const Graph& g, const RCliqueIndex& idx,
                                  int s, cid R, Live&& live, F&& visit) {
  for_each_s_clique_containing(g, idx, s, R, [&](std::span<const cid> others) {
    for (cid o : others)
      if (!live(o)) return;
    visit(others);
  });
}

}  // namespace nucleus
