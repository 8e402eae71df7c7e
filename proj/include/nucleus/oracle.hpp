#pragma once

#include <algorithm>
#include <cstdint>
#include <span>
#include <vector>

#include "nucleus/common.hpp"
#include "nucleus/graph.hpp"

namespace nucleus {
namespace oracle {

// Definitionally direct single-threaded reference implementations used as
// ground truth in tests. Cliques come from exhaustive subset testing over
// bitmask adjacency, so graphs are limited to 64 vertices.

struct BitGraph {
  vid n = 0;
  std::vector<std::uint64_t> adj;

  explicit BitGraph(const Graph& g) : n(g.n), adj(g.n, 0) {
    if (g.n > 64) throw config_error("oracle supports at most 64 vertices");
    for (vid v = 0; v < g.n; ++v)
      for (vid u : g.neighbors(v)) adj[v] |= 1ull << u;
  }
  bool edge(vid u, vid v) const { return (adj[u] >> v) & 1; }
};

// All k-cliques as sorted tuples in lexicographic order.
inline std::vector<std::vector<vid>> k_cliques(const BitGraph& g, int k) {
  std::vector<std::vector<vid>> out;
  std::vector<vid> cur;
  auto rec = [&](auto&& self, vid start, std::uint64_t cand) -> void {
    if (static_cast<int>(cur.size()) == k) {
      out.push_back(cur);
      return;
    }
    for (vid v = start; v < g.n; ++v) {
      if (!((cand >> v) & 1)) continue;
      cur.push_back(v);
      self(self, v + 1, cand & g.adj[v]);
      cur.pop_back();
    }
  };
  rec(rec, 0, ~0ull >> (64 - (g.n == 0 ? 1 : g.n)));
  if (k == 0) return {};
  return out;
}

inline std::vector<std::vector<vid>> k_cliques(const Graph& g, int k) {
  return k_cliques(BitGraph(g), k);
}

inline cid tuple_id(const std::vector<std::vector<vid>>& cliques,
                    const std::vector<vid>& t) {
  auto it = std::lower_bound(cliques.begin(), cliques.end(), t);
  if (it == cliques.end() || *it != t) return kNone;
  return static_cast<cid>(it - cliques.begin());
}

struct Incidence {
  std::vector<std::vector<cid>> members;  // per s-clique: ids of its r-subsets
};

inline Incidence build_incidence(const std::vector<std::vector<vid>>& rc,
                                 const std::vector<std::vector<vid>>& sc,
                                 int r) {
  Incidence inc;
  inc.members.resize(sc.size());
  std::vector<int> pick(r);
  std::vector<vid> t(r);
  for (std::size_t si = 0; si < sc.size(); ++si) {
    const auto& verts = sc[si];
    const int s = static_cast<int>(verts.size());
    for (int i = 0; i < r; ++i) pick[i] = i;
    while (true) {
      for (int i = 0; i < r; ++i) t[i] = verts[pick[i]];
      inc.members[si].push_back(tuple_id(rc, t));
      int i = r - 1;
      while (i >= 0 && pick[i] == s - r + i) --i;
      if (i < 0) break;
      ++pick[i];
      for (int j = i + 1; j < r; ++j) pick[j] = pick[j - 1] + 1;
    }
  }
  return inc;
}

struct PeelOracle {
  std::vector<std::int64_t> coreness;
  std::int64_t k_max = 0;
  std::vector<std::vector<vid>> r_cliques;
  std::vector<std::vector<vid>> s_cliques;
};

// One r-clique removed per step: always a minimum s-clique-degree clique,
// ties broken by id. Coreness is the running maximum of the degree at
// removal time. An s-clique dies with its first removed member.
inline PeelOracle peel(const Graph& g, int r, int s) {
  PeelOracle res;
  BitGraph bg(g);
  res.r_cliques = k_cliques(bg, r);
  res.s_cliques = k_cliques(bg, s);
  const cid n_r = static_cast<cid>(res.r_cliques.size());
  Incidence inc = build_incidence(res.r_cliques, res.s_cliques, r);

  std::vector<std::vector<cid>> incident(n_r);
  for (std::size_t si = 0; si < inc.members.size(); ++si)
    for (cid R : inc.members[si]) incident[R].push_back(static_cast<cid>(si));

  std::vector<std::int64_t> degree(n_r, 0);
  for (cid R = 0; R < n_r; ++R) degree[R] = incident[R].size();
  std::vector<char> alive(n_r, 1);
  std::vector<char> s_alive(res.s_cliques.size(), 1);
  res.coreness.assign(n_r, 0);

  std::int64_t running = 0;
  for (cid step = 0; step < n_r; ++step) {
    cid pick = kNone;
    for (cid R = 0; R < n_r; ++R)
      if (alive[R] && (pick == kNone || degree[R] < degree[pick])) pick = R;
    running = std::max(running, degree[pick]);
    res.coreness[pick] = running;
    alive[pick] = 0;
    for (cid si : incident[pick]) {
      if (!s_alive[si]) continue;
      s_alive[si] = 0;
      for (cid other : inc.members[si])
        if (alive[other]) --degree[other];
    }
  }
  for (auto c : res.coreness) res.k_max = std::max(res.k_max, c);
  return res;
}

// Connected components of the r-cliques with coreness >= c, adjacent when
// they share an s-clique all of whose r-subsets have coreness >= c.
inline std::vector<std::vector<cid>> nuclei(const PeelOracle& o, int r,
                                            std::int64_t c) {
  const cid n_r = static_cast<cid>(o.r_cliques.size());
  Incidence inc = build_incidence(o.r_cliques, o.s_cliques, r);
  std::vector<cid> dsu(n_r);
  for (cid i = 0; i < n_r; ++i) dsu[i] = i;
  auto find = [&](cid x) {
    while (dsu[x] != x) x = dsu[x] = dsu[dsu[x]];
    return x;
  };
  for (const auto& mem : inc.members) {
    bool strong = true;
    for (cid R : mem)
      if (o.coreness[R] < c) {
        strong = false;
        break;
      }
    if (!strong) continue;
    for (std::size_t i = 1; i < mem.size(); ++i) {
      cid a = find(mem[0]), b = find(mem[i]);
      if (a != b) dsu[std::max(a, b)] = std::min(a, b);
    }
  }
  std::vector<std::vector<cid>> groups;
  std::vector<std::pair<cid, cid>> by_root;
  for (cid R = 0; R < n_r; ++R)
    if (o.coreness[R] >= c) by_root.emplace_back(find(R), R);
  std::sort(by_root.begin(), by_root.end());
  std::size_t i = 0;
  while (i < by_root.size()) {
    std::size_t j = i;
    groups.emplace_back();
    while (j < by_root.size() && by_root[j].first == by_root[i].first)
      groups.back().push_back(by_root[j++].second);
    i = j;
  }
  std::sort(groups.begin(), groups.end());
  return groups;
}

// Independent cross-check: coreness via the per-level maximal-subgraph
// fixpoint. For each c, repeatedly discard r-cliques with fewer than c
// surviving s-cliques; survivors have coreness >= c.
inline std::vector<std::int64_t> coreness_fixpoint(const Graph& g, int r,
                                                   int s) {
  BitGraph bg(g);
  auto rc = k_cliques(bg, r);
  auto sc = k_cliques(bg, s);
  const cid n_r = static_cast<cid>(rc.size());
  Incidence inc = build_incidence(rc, sc, r);
  std::vector<std::int64_t> core(n_r, 0);
  for (std::int64_t c = 1;; ++c) {
    std::vector<char> in(n_r, 1);
    bool any = true;
    while (true) {
      std::vector<std::int64_t> deg(n_r, 0);
      for (const auto& mem : inc.members) {
        bool ok = true;
        for (cid R : mem)
          if (!in[R]) ok = false;
        if (!ok) continue;
        for (cid R : mem) ++deg[R];
      }
      bool removed = false;
      for (cid R = 0; R < n_r; ++R)
        if (in[R] && deg[R] < c) {
          in[R] = 0;
          removed = true;
        }
      if (!removed) break;
    }
    any = false;
    for (cid R = 0; R < n_r; ++R)
      if (in[R]) {
        core[R] = c;
        any = true;
      }
    if (!any) break;
  }
  return core;
}

// Degeneracy via sequential repeated minimum-degree removal.
inline std::int64_t degeneracy(const Graph& g) {
  std::vector<std::int64_t> deg(g.n);
  std::vector<char> alive(g.n, 1);
  for (vid v = 0; v < g.n; ++v) deg[v] = g.degree(v);
  std::int64_t d = 0;
  for (vid step = 0; step < g.n; ++step) {
    vid pick = kNone;
    for (vid v = 0; v < g.n; ++v)
      if (alive[v] && (pick == kNone || deg[v] < deg[pick])) pick = v;
    d = std::max(d, deg[pick]);
    alive[pick] = 0;
    for (vid u : g.neighbors(pick))
      if (alive[u]) --deg[u];
  }
  return d;
}

}  // namespace oracle
}  // namespace nucleus
