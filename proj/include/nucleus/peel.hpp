#pragma once

#include <algorithm>
#include <cstdint>
#include <span>
#include <vector>

#include "nucleus/bucket.hpp"
#include "nucleus/cliques.hpp"
#include "nucleus/common.hpp"
#include "nucleus/graph.hpp"

#if defined(_OPENMP)
#include <omp.h>
#endif

namespace nucleus {

// Frozen per-clique levels handed to link callbacks. Values are final for
// both arguments of every call (coreness ranks; exact peeling uses the
// coreness values themselves).
struct LevelView {
  std::span<const std::int64_t> level;
  std::int64_t operator[](cid id) const { return level[id]; }
};

struct PeelResult {
  std::vector<std::int64_t> coreness;
  std::int64_t k_max = 0;
  std::int64_t rounds = 0;

  std::int64_t bytes() const {
    return static_cast<std::int64_t>(coreness.size() * sizeof(std::int64_t));
  }
};

namespace detail {

enum class CliqueState : char { kLive = 0, kCurrent = 1, kDead = 2 };

struct NoLink {
  void operator()(cid, cid, const LevelView&) const {}
};

// One peeling round over the frontier A (states already set to kCurrent,
// levels frozen). Fires links and accumulates decrements for live cliques:
//   - an s-clique first broken in an earlier round only links each current
//     member to the broken clique's lowest-level member; the s-clique
//     supports connectivity at exactly that level and its loss was already
//     charged when it broke;
//   - an s-clique alive entering this round is processed by its minimum-id
//     current member, which links the other same-round members to itself
//     and charges the loss to each still-live member once.
// Duplicate links may fire; link must be thread-safe and idempotent.
template <class Link>
void peel_round(const Graph& g, const RCliqueIndex& idx, int s,
                std::span<const cid> frontier, std::vector<CliqueState>& state,
                std::span<const std::int64_t> level, const LevelView& view,
                Link&& link, std::int64_t* delta,
                std::vector<std::vector<cid>>& touched) {
#pragma omp parallel for schedule(dynamic, 8)
  for (std::int64_t ai = 0; ai < static_cast<std::int64_t>(frontier.size());
       ++ai) {
    const cid R = frontier[ai];
    int tid = 0;
#if defined(_OPENMP)
    tid = omp_get_thread_num();
#endif
    auto& mine = touched[tid];
    for_each_s_clique_containing(
        g, idx, s, R, [&](std::span<const cid> others) {
          cid breaker = kNone;
          std::int64_t breaker_level = 0;
          bool defer = false;  // a smaller-id member peels this round
          for (cid o : others) {
            if (state[o] == CliqueState::kDead) {
              std::int64_t lv = level[o];
              if (breaker == kNone || lv < breaker_level ||
                  (lv == breaker_level && o < breaker)) {
                breaker = o;
                breaker_level = lv;
              }
            } else if (state[o] == CliqueState::kCurrent && o < R) {
              defer = true;
            }
          }
          if (breaker != kNone) {
            link(breaker, R, view);
            return;
          }
          if (defer) return;
          for (cid o : others) {
            if (state[o] == CliqueState::kCurrent) {
              link(o, R, view);
            } else {
#pragma omp atomic
              delta[o] += 1;
              mine.push_back(o);
            }
          }
        });
  }
}

// Collects the per-thread touched lists into one aggregated, sorted batch
// and resets the delta array.
inline std::vector<std::pair<cid, std::int64_t>> drain_deltas(
    std::vector<std::vector<cid>>& touched, std::int64_t* delta) {
  std::vector<std::pair<cid, std::int64_t>> batch;
  for (auto& mine : touched) {
    for (cid o : mine)
      if (delta[o] != 0) {
        batch.emplace_back(o, delta[o]);
        delta[o] = 0;
      }
    mine.clear();
  }
  std::sort(batch.begin(), batch.end());
  return batch;
}

}  // namespace detail

// Bucketing-based parallel peeling; coreness[R] is the exact (r,s)-clique
// core number for every R. res.coreness must be pre-sized to n_r; builders
// that need to read frozen levels during linking can hold a span into it.
template <class Link>
void peel_inplace(const OrientedGraph& og, const RCliqueIndex& idx,
                  const SCliqueCounts& init, PeelResult& res, Link&& link,
                  const Deadline& deadline = {}) {
  const Graph& g = *og.base;
  const cid n_r = idx.size();
  const int s = init.s;

  res.k_max = 0;
  res.rounds = 0;
  std::fill(res.coreness.begin(), res.coreness.end(), 0);
  if (n_r == 0) return;

  std::vector<std::int64_t> counts = init.counts;
  BucketStructure buckets({counts.data(), counts.size()});
  std::vector<detail::CliqueState> state(n_r, detail::CliqueState::kLive);
  std::vector<std::int64_t> delta(n_r, 0);
  LevelView view{{res.coreness.data(), res.coreness.size()}};

  int nthreads = 1;
#if defined(_OPENMP)
  nthreads = omp_get_max_threads();
#endif
  std::vector<std::vector<cid>> touched(nthreads);

  std::vector<cid> frontier;
  cid processed = 0;
  while (processed < n_r) {
    deadline.check("peel");
    const std::int64_t key = buckets.extract_min(frontier);
    ++res.rounds;
    for (cid R : frontier) {
      res.coreness[R] = key;
      state[R] = detail::CliqueState::kCurrent;
    }
    res.k_max = std::max(res.k_max, key);

    detail::peel_round(g, idx, s, frontier, state,
                       {res.coreness.data(), res.coreness.size()}, view, link,
                       delta.data(), touched);

    auto batch = detail::drain_deltas(touched, delta.data());
    buckets.decrement_and_rebucket({batch.data(), batch.size()}, counts);

    for (cid R : frontier) state[R] = detail::CliqueState::kDead;
    processed += static_cast<cid>(frontier.size());
  }
}

template <class Link>
PeelResult peel(const OrientedGraph& og, const RCliqueIndex& idx,
                const SCliqueCounts& init, Link&& link,
                const Deadline& deadline = {}) {
  PeelResult res;
  res.coreness.assign(idx.size(), 0);
  peel_inplace(og, idx, init, res, link, deadline);
  return res;
}

inline PeelResult peel(const OrientedGraph& og, const RCliqueIndex& idx,
                       const SCliqueCounts& init,
                       const Deadline& deadline = {}) {
  return peel(og, idx, init, detail::NoLink{}, deadline);
}

}  // namespace nucleus
