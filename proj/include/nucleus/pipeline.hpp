#pragma once

#include <algorithm>
#include <cstdint>
#include <string>

#include "nucleus/builders.hpp"
#include "nucleus/cliques.hpp"
#include "nucleus/common.hpp"
#include "nucleus/graph.hpp"
#include "nucleus/hierarchy.hpp"
#include "nucleus/peel.hpp"
#include "nucleus/peel_approx.hpp"

namespace nucleus {

enum class Algo { te, el, bl };

inline const char* algo_name(Algo a) {
  switch (a) {
    case Algo::te: return "te";
    case Algo::el: return "el";
    case Algo::bl: return "bl";
  }
  return "?";
}

inline Algo algo_from_name(const std::string& s) {
  if (s == "te") return Algo::te;
  if (s == "el") return Algo::el;
  if (s == "bl") return Algo::bl;
  throw config_error("unknown algorithm '" + s + "' (expected te, el or bl)");
}

struct PipelineConfig {
  int r = 2;
  int s = 3;
  Algo algo = Algo::el;
  bool approx = false;
  double delta = 0.1;
  bool raw_upper_bound = false;
  bool collapse = true;  // drop single-child parents at finalization
  double timeout_secs = 0;
};

struct PipelineResult {
  bool is_approx = false;
  PeelResult exact;
  ApproxResult approx;
  HierarchyTree tree;
  BuildCounters counters;
  RCliqueIndex idx;
  std::int64_t n_s = 0;
  std::int64_t rounds = 0;
  double k_max_value = 0;
  double t_orient = 0, t_index = 0, t_count = 0, t_peel = 0, t_tree = 0;
  std::int64_t peak_bytes = 0;

  Levels levels() const {
    return is_approx ? levels_of(approx) : levels_of(exact);
  }
};

// orient -> index r-cliques -> count s-cliques per r-clique -> peel
// (interleaving links for el/bl) -> construct the hierarchy tree.
inline PipelineResult run_pipeline(const Graph& g, const PipelineConfig& cfg) {
  if (cfg.r < 1 || cfg.r >= cfg.s)
    throw config_error("require 1 <= r < s");
  if (cfg.approx && !(cfg.delta > 0))
    throw config_error("delta must be > 0 with --approx");
  Deadline deadline = cfg.timeout_secs > 0 ? Deadline(cfg.timeout_secs)
                                           : Deadline();
  PipelineResult out;
  out.is_approx = cfg.approx;

  Timer t;
  OrientedGraph og = orient(g);
  out.t_orient = t.lap();

  out.idx = index_r_cliques(og, cfg.r);
  out.t_index = t.lap();
  deadline.check("index");

  SCliqueCounts counts = count_s_per_r(og, out.idx, cfg.s);
  out.n_s = counts.n_s;
  out.t_count = t.lap();
  deadline.check("count");

  const cid n_r = out.idx.size();
  std::int64_t max_count = 0;
  for (auto c : counts.counts) max_count = std::max(max_count, c);

  std::int64_t working = g.bytes() + og.bytes() + out.idx.bytes() +
                         counts.bytes();
  auto track_peak = [&](std::int64_t extra) {
    out.peak_bytes = std::max(out.peak_bytes, working + extra);
  };

  if (cfg.approx) {
    ApproxConfig acfg;
    acfg.delta = cfg.delta;
    acfg.raw_upper_bound = cfg.raw_upper_bound;
    out.approx.approx_coreness.assign(n_r, 0.0);
    out.approx.level_rank.assign(n_r, 0);

    if (cfg.algo == Algo::el) {
      LinkEfficientBuilder el(
          n_r, {out.approx.level_rank.data(), out.approx.level_rank.size()});
      peel_approx_inplace(og, out.idx, counts, acfg, out.approx,
                          [&](cid a, cid b, const LevelView&) { el.link(a, b); },
                          deadline);
      out.t_peel = t.lap();
      track_peak(el.bytes() + out.approx.bytes() + counts.bytes() * 3);
      out.tree = el.build(levels_of(out.approx));
      out.counters = el.counters();
    } else if (cfg.algo == Algo::bl) {
      LinkBasicBuilder bl(n_r, n_r + 1);
      peel_approx_inplace(og, out.idx, counts, acfg, out.approx,
                          [&](cid a, cid b, const LevelView& v) {
                            bl.link(a, b, v);
                          },
                          deadline);
      out.t_peel = t.lap();
      track_peak(bl.bytes() + out.approx.bytes() + counts.bytes() * 3);
      out.tree = bl.build(levels_of(out.approx));
      out.counters = bl.counters();
    } else {
      peel_approx_inplace(og, out.idx, counts, acfg, out.approx,
                          detail::NoLink{}, deadline);
      out.t_peel = t.lap();
      track_peak(out.approx.bytes() + counts.bytes() * 3);
      out.tree = build_te(og, out.idx, cfg.s, levels_of(out.approx),
                          &out.counters, deadline);
    }
    out.rounds = out.approx.rounds;
    out.k_max_value =
        out.approx.rank_values.empty() ? 0 : out.approx.rank_values.back();
  } else {
    out.exact.coreness.assign(n_r, 0);
    if (cfg.algo == Algo::el) {
      LinkEfficientBuilder el(
          n_r, {out.exact.coreness.data(), out.exact.coreness.size()});
      peel_inplace(og, out.idx, counts, out.exact,
                   [&](cid a, cid b, const LevelView&) { el.link(a, b); },
                   deadline);
      out.t_peel = t.lap();
      track_peak(el.bytes() + out.exact.bytes() + counts.bytes() * 3);
      out.tree = el.build(levels_of(out.exact));
      out.counters = el.counters();
    } else if (cfg.algo == Algo::bl) {
      LinkBasicBuilder bl(n_r, max_count + 1);
      peel_inplace(og, out.idx, counts, out.exact,
                   [&](cid a, cid b, const LevelView& v) { bl.link(a, b, v); },
                   deadline);
      out.t_peel = t.lap();
      track_peak(bl.bytes() + out.exact.bytes() + counts.bytes() * 3);
      out.tree = bl.build(levels_of(out.exact));
      out.counters = bl.counters();
    } else {
      peel_inplace(og, out.idx, counts, out.exact, detail::NoLink{}, deadline);
      out.t_peel = t.lap();
      track_peak(out.exact.bytes() + counts.bytes() * 3);
      out.tree = build_te(og, out.idx, cfg.s, levels_of(out.exact),
                          &out.counters, deadline);
    }
    out.rounds = out.exact.rounds;
    out.k_max_value = static_cast<double>(out.exact.k_max);
  }
  if (cfg.collapse) out.tree = collapse_single_children(out.tree);
  out.t_tree = t.lap();
  track_peak(out.tree.bytes());
  return out;
}

}  // namespace nucleus
