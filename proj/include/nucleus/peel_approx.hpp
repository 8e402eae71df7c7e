#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

#include "nucleus/cliques.hpp"
#include "nucleus/common.hpp"
#include "nucleus/graph.hpp"
#include "nucleus/peel.hpp"

namespace nucleus {

struct ApproxConfig {
  double delta = 0.5;
  // Max re-processings of one geometric bucket before survivors are carried
  // into the next; 0 selects ceil(log_{1+delta/C(s,r)}(n)).
  std::int64_t round_cap = 0;
  // Report the raw bucket upper bound instead of min(bound, original degree).
  bool raw_upper_bound = false;
};

struct ApproxResult {
  std::vector<double> approx_coreness;
  std::int64_t rounds = 0;  // peeling sub-rounds that extracted work
  // Dense monotone levels backing the hierarchy builders: rank 0 is value 0,
  // ranks follow the ascending distinct assigned values.
  std::vector<std::int64_t> level_rank;
  std::vector<double> rank_values;
  std::int64_t max_rank = 0;

  std::int64_t bytes() const {
    return static_cast<std::int64_t>(
        approx_coreness.size() * sizeof(double) +
        level_rank.size() * sizeof(std::int64_t) +
        rank_values.size() * sizeof(double));
  }
};

namespace detail {

// floor(log_{1+delta}(max(d,1)/(C+delta))) clamped to >= 0; degrees below
// C+delta all land in bucket 0.
inline std::int64_t geo_bucket_of(std::int64_t d, double base_c, double delta) {
  double x = static_cast<double>(std::max<std::int64_t>(d, 1)) / base_c;
  if (x <= 1.0) return 0;
  std::int64_t i =
      static_cast<std::int64_t>(std::floor(std::log(x) / std::log1p(delta)));
  return std::max<std::int64_t>(i, 0);
}

inline double geo_upper(std::int64_t i, double base_c, double delta) {
  return base_c * std::pow(1.0 + delta, static_cast<double>(i + 1));
}

}  // namespace detail

inline std::int64_t default_round_cap(vid n, int r, int s, double delta) {
  double c = static_cast<double>(binom(s, r));
  double cap = std::ceil(std::log(std::max<double>(n, 2)) / std::log1p(delta / c));
  return std::max<std::int64_t>(1, static_cast<std::int64_t>(cap));
}

// Geometric-bucket approximate peeling. Buckets span degree ranges
// [(C+d)(1+d)^i, (C+d)(1+d)^{i+1}); every sub-round peels all unpeeled
// r-cliques whose current degree sits at or below the bucket, since degrees
// falling under the frontier are never rebucketed downward. Survivors of a
// bucket processed round_cap times are carried into the next bucket. The
// assigned value is the upper boundary of the bucket the clique was actually
// peeled in, refined by min with its original degree unless raw_upper_bound.
template <class Link>
void peel_approx_inplace(const OrientedGraph& og, const RCliqueIndex& idx,
                         const SCliqueCounts& init, const ApproxConfig& cfg,
                         ApproxResult& res, Link&& link,
                         const Deadline& deadline = {}) {
  if (!(cfg.delta > 0)) throw config_error("delta must be > 0");
  const Graph& g = *og.base;
  const cid n_r = idx.size();
  const int s = init.s;
  const int r = idx.r();
  const double base_c = static_cast<double>(binom(s, r)) + cfg.delta;
  const std::int64_t cap = cfg.round_cap > 0
                               ? cfg.round_cap
                               : default_round_cap(g.n, r, s, cfg.delta);

  res.rounds = 0;
  res.max_rank = 0;
  std::fill(res.approx_coreness.begin(), res.approx_coreness.end(), 0.0);
  std::fill(res.level_rank.begin(), res.level_rank.end(), 0);
  res.rank_values.assign(1, 0.0);
  if (n_r == 0) return;

  std::vector<std::int64_t> counts = init.counts;
  std::vector<std::int64_t> key(n_r);
  std::int64_t max_key = 0;
  for (cid i = 0; i < n_r; ++i) {
    key[i] = detail::geo_bucket_of(counts[i], base_c, cfg.delta);
    max_key = std::max(max_key, key[i]);
  }
  std::vector<std::vector<cid>> buckets(max_key + 1);
  for (cid i = 0; i < n_r; ++i) buckets[key[i]].push_back(i);

  std::vector<detail::CliqueState> state(n_r, detail::CliqueState::kLive);
  std::vector<std::int64_t> delta_acc(n_r, 0);
  LevelView view{{res.level_rank.data(), res.level_rank.size()}};

  int nthreads = 1;
#if defined(_OPENMP)
  nthreads = omp_get_max_threads();
#endif
  std::vector<std::vector<cid>> touched(nthreads);

  auto rank_of_value = [&](double v) -> std::int64_t {
    // assigned values are non-decreasing across sub-rounds
    if (v == res.rank_values.back())
      return static_cast<std::int64_t>(res.rank_values.size()) - 1;
    if (v < res.rank_values.back())
      throw protocol_error("assigned approximate values regressed");
    res.rank_values.push_back(v);
    return static_cast<std::int64_t>(res.rank_values.size()) - 1;
  };

  std::vector<cid> frontier;
  std::vector<std::pair<double, cid>> by_value;
  cid processed = 0;
  std::int64_t cur = 0;
  std::int64_t rounds_in_bucket = 0;
  while (processed < n_r) {
    deadline.check("peel-approx");
    if (cur >= static_cast<std::int64_t>(buckets.size()))
      throw protocol_error("geometric frontier escaped bucket range");
    frontier.clear();
    for (cid id : buckets[cur])
      if (state[id] == detail::CliqueState::kLive && key[id] == cur)
        frontier.push_back(id);
    buckets[cur].clear();
    if (frontier.empty()) {
      ++cur;
      rounds_in_bucket = 0;
      continue;
    }
    std::sort(frontier.begin(), frontier.end());
    ++res.rounds;
    ++rounds_in_bucket;

    const double upper = detail::geo_upper(cur, base_c, cfg.delta);
    by_value.clear();
    for (cid R : frontier) {
      double v;
      if (init.counts[R] == 0)
        v = 0.0;
      else if (cfg.raw_upper_bound)
        v = upper;
      else
        v = std::min(upper, static_cast<double>(init.counts[R]));
      by_value.emplace_back(v, R);
      state[R] = detail::CliqueState::kCurrent;
    }
    std::sort(by_value.begin(), by_value.end());
    for (const auto& [v, R] : by_value) {
      res.approx_coreness[R] = v;
      res.level_rank[R] = rank_of_value(v);
      res.max_rank = std::max(res.max_rank, res.level_rank[R]);
    }

    detail::peel_round(g, idx, s, frontier, state,
                       {res.level_rank.data(), res.level_rank.size()}, view,
                       link, delta_acc.data(), touched);

    auto batch = detail::drain_deltas(touched, delta_acc.data());
    for (const auto& [id, d] : batch) {
      if (state[id] != detail::CliqueState::kLive) continue;
      counts[id] = std::max<std::int64_t>(0, counts[id] - d);
      std::int64_t k =
          std::max(detail::geo_bucket_of(counts[id], base_c, cfg.delta), cur);
      if (k != key[id]) {
        key[id] = k;
        buckets[k].push_back(id);
      }
    }

    for (cid R : frontier) state[R] = detail::CliqueState::kDead;
    processed += static_cast<cid>(frontier.size());

    // survivors of an exhausted bucket carry into the next one
    bool bucket_done = true;
    for (cid id : buckets[cur])
      if (state[id] == detail::CliqueState::kLive && key[id] == cur) {
        bucket_done = false;
        break;
      }
    if (bucket_done || rounds_in_bucket >= cap) {
      if (!bucket_done) {
        if (cur + 1 >= static_cast<std::int64_t>(buckets.size()))
          buckets.resize(cur + 2);
        for (cid id : buckets[cur])
          if (state[id] == detail::CliqueState::kLive && key[id] == cur) {
            key[id] = cur + 1;
            buckets[cur + 1].push_back(id);
          }
        buckets[cur].clear();
      }
      ++cur;
      rounds_in_bucket = 0;
    }
  }
}

template <class Link>
ApproxResult peel_approx(const OrientedGraph& og, const RCliqueIndex& idx,
                         const SCliqueCounts& init, const ApproxConfig& cfg,
                         Link&& link, const Deadline& deadline = {}) {
  ApproxResult res;
  res.approx_coreness.assign(idx.size(), 0.0);
  res.level_rank.assign(idx.size(), 0);
  peel_approx_inplace(og, idx, init, cfg, res, link, deadline);
  return res;
}

inline ApproxResult peel_approx(const OrientedGraph& og,
                                const RCliqueIndex& idx,
                                const SCliqueCounts& init,
                                const ApproxConfig& cfg,
                                const Deadline& deadline = {}) {
  return peel_approx(og, idx, init, cfg, detail::NoLink{}, deadline);
}

}  // namespace nucleus
