#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <istream>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "nucleus/cliques.hpp"
#include "nucleus/common.hpp"
#include "nucleus/graph.hpp"

namespace nucleus {

// Rooted forest over r-cliques. Node ids [0, n_leaves) are the leaves and
// coincide with r-clique ids; internal nodes follow. level stores the
// coreness at which a node formed (for leaves, the clique's coreness).
// After single-child collapse, levels strictly decrease from an internal
// node to its internal parent; a leaf's parent level never exceeds its own.
struct HierarchyTree {
  cid n_leaves = 0;
  std::vector<cid> parent;    // kNone for roots
  std::vector<double> level;

  cid node_count() const { return static_cast<cid>(parent.size()); }
  bool is_leaf(cid v) const { return v < n_leaves; }

  static HierarchyTree make_leaves(cid n, std::span<const double> leaf_levels) {
    HierarchyTree t;
    t.n_leaves = n;
    t.parent.assign(n, kNone);
    t.level.assign(leaf_levels.begin(), leaf_levels.end());
    return t;
  }

  cid add_parent(double lv, std::span<const cid> children) {
    cid id = node_count();
    parent.push_back(kNone);
    level.push_back(lv);
    for (cid c : children) parent[c] = id;
    return id;
  }

  std::vector<cid> roots() const {
    std::vector<cid> r;
    for (cid v = 0; v < node_count(); ++v)
      if (parent[v] == kNone) r.push_back(v);
    return r;
  }

  std::int64_t bytes() const {
    return static_cast<std::int64_t>(parent.size() * sizeof(cid) +
                                     level.size() * sizeof(double));
  }
};

// Removes internal nodes with exactly one child, reattaching the child to
// its grandparent. Leaf ids are preserved; internal nodes are renumbered.
inline HierarchyTree collapse_single_children(const HierarchyTree& t) {
  const cid n = t.node_count();
  std::vector<std::int64_t> child_count(n, 0);
  for (cid v = 0; v < n; ++v)
    if (t.parent[v] != kNone) ++child_count[t.parent[v]];

  // resolve each node's first surviving ancestor
  std::vector<char> drop(n, 0);
  for (cid v = t.n_leaves; v < n; ++v)
    if (child_count[v] == 1) drop[v] = 1;

  std::vector<cid> remap(n, kNone);
  HierarchyTree out;
  out.n_leaves = t.n_leaves;
  for (cid v = 0; v < t.n_leaves; ++v) {
    remap[v] = v;
    out.parent.push_back(kNone);
    out.level.push_back(t.level[v]);
  }
  for (cid v = t.n_leaves; v < n; ++v)
    if (!drop[v]) {
      remap[v] = out.node_count();
      out.parent.push_back(kNone);
      out.level.push_back(t.level[v]);
    }
  for (cid v = 0; v < n; ++v) {
    if (drop[v] || remap[v] == kNone) continue;
    cid p = t.parent[v];
    while (p != kNone && drop[p]) p = t.parent[p];
    out.parent[remap[v]] = p == kNone ? kNone : remap[p];
  }
  return out;
}

// Maximal subtree at or above the cut level: one per nucleus.
struct Nucleus {
  double level = 0;  // the queried cut level
  std::vector<cid> member_r_cliques;
  std::vector<vid> vertex_set;
  double edge_density = -1;  // filled by annotate_density
  bool degenerate_density = false;
};

// Nuclei of the cut at level c: one per maximal subtree whose root has
// level >= c; leaves below c are excluded. Out-of-range c yields an empty
// list (k_max + 1 legitimately returns no nuclei). leaf_verts maps a leaf id
// to its r-clique's vertex tuple.
template <class LeafVerts>
std::vector<Nucleus> cut(const HierarchyTree& t, double c,
                         LeafVerts&& leaf_verts) {
  std::vector<Nucleus> out;
  if (c <= 0) return out;
  const cid n = t.node_count();
  // top[v]: highest ancestor of v (inclusive) with level >= c
  std::vector<cid> top(n, kNone);
  std::vector<cid> path;
  for (cid v = 0; v < n; ++v) {
    if (t.level[v] < c || top[v] != kNone) continue;
    cid u = v;
    path.clear();
    while (true) {
      path.push_back(u);
      cid p = t.parent[u];
      if (p == kNone || t.level[p] < c) break;
      if (top[p] != kNone) {
        u = top[p];
        path.push_back(u);
        break;
      }
      u = p;
    }
    cid anchor = top[path.back()] != kNone ? top[path.back()] : path.back();
    for (cid w : path) top[w] = anchor;
  }
  std::vector<cid> anchors;
  for (cid v = 0; v < t.n_leaves; ++v)
    if (t.level[v] >= c) anchors.push_back(top[v]);
  std::sort(anchors.begin(), anchors.end());
  anchors.erase(std::unique(anchors.begin(), anchors.end()), anchors.end());
  std::vector<std::int64_t> slot(n, -1);
  for (std::size_t i = 0; i < anchors.size(); ++i) slot[anchors[i]] = i;
  out.resize(anchors.size());
  for (auto& nu : out) nu.level = c;
  for (cid v = 0; v < t.n_leaves; ++v)
    if (t.level[v] >= c) out[slot[top[v]]].member_r_cliques.push_back(v);
  for (auto& nu : out) {
    for (cid m : nu.member_r_cliques) {
      std::span<const vid> vs = leaf_verts(m);
      nu.vertex_set.insert(nu.vertex_set.end(), vs.begin(), vs.end());
    }
    std::sort(nu.vertex_set.begin(), nu.vertex_set.end());
    nu.vertex_set.erase(std::unique(nu.vertex_set.begin(), nu.vertex_set.end()),
                        nu.vertex_set.end());
  }
  return out;
}

inline std::vector<Nucleus> cut(const HierarchyTree& t, const RCliqueIndex& idx,
                                double c) {
  return cut(t, c, [&](cid m) { return idx.verts_of(m); });
}

// Induced edge count over C(|set|,2). Sets smaller than 2 report 1.0 and
// flag the convention.
inline double edge_density(const Graph& g, std::span<const vid> vertex_set,
                           bool* degenerate = nullptr) {
  if (degenerate) *degenerate = false;
  const std::int64_t k = static_cast<std::int64_t>(vertex_set.size());
  if (k < 2) {
    if (degenerate) *degenerate = true;
    return 1.0;
  }
  std::vector<vid> sorted(vertex_set.begin(), vertex_set.end());
  std::sort(sorted.begin(), sorted.end());
  std::int64_t edges = 0;
  for (vid v : sorted) {
    auto nb = g.neighbors(v);
    // two-pointer over the sorted set
    auto it = nb.begin();
    for (vid u : sorted) {
      if (u >= v) break;
      it = std::lower_bound(it, nb.end(), u);
      if (it != nb.end() && *it == u) ++edges;
    }
  }
  return static_cast<double>(edges) / static_cast<double>(k * (k - 1) / 2);
}

inline void annotate_density(const Graph& g, std::vector<Nucleus>& nuclei) {
  for (auto& nu : nuclei)
    nu.edge_density = edge_density(
        g, {nu.vertex_set.data(), nu.vertex_set.size()}, &nu.degenerate_density);
}

namespace detail {

inline std::string format_level(double lv) {
  if (lv == std::floor(lv) && std::abs(lv) < 1e15) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%lld", static_cast<long long>(lv));
    return buf;
  }
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", lv);
  return buf;
}

}  // namespace detail

// One line per node: `node_id parent_id level leaf_clique_vertices_or_dash`.
// A synthetic level-0 root is appended only when the forest has several
// roots, so the exported file is always a single tree.
inline void export_tree(const HierarchyTree& t, const RCliqueIndex& idx, int r,
                        int s, std::int64_t k_max, std::ostream& out) {
  auto roots = t.roots();
  const bool synthetic = roots.size() > 1;
  const cid synth_id = t.node_count();
  out << "# r=" << r << " s=" << s << " n_r=" << t.n_leaves
      << " k_max=" << k_max << " nodes=" << (t.node_count() + (synthetic ? 1 : 0))
      << "\n";
  for (cid v = 0; v < t.node_count(); ++v) {
    cid p = t.parent[v];
    if (p == kNone && synthetic) p = synth_id;
    out << v << ' ' << p << ' ' << detail::format_level(t.level[v]) << ' ';
    if (t.is_leaf(v)) {
      auto vs = idx.verts_of(v);
      for (std::size_t i = 0; i < vs.size(); ++i)
        out << (i ? "," : "") << vs[i];
    } else {
      out << '-';
    }
    out << '\n';
  }
  if (synthetic) out << synth_id << " -1 0 -\n";
}

struct ImportedTree {
  HierarchyTree tree;
  int r = 0;
  int s = 0;
  std::int64_t k_max = 0;
  std::vector<vid> leaf_verts;  // n_leaves * r
};

inline ImportedTree import_tree(std::istream& in) {
  ImportedTree res;
  std::string line;
  std::size_t lineno = 0;
  if (!std::getline(in, line)) throw parse_error("empty tree file", 1);
  ++lineno;
  cid nodes = 0;
  {
    long long n_r = 0, kmax = 0, nn = 0;
    if (std::sscanf(line.c_str(), "# r=%d s=%d n_r=%lld k_max=%lld nodes=%lld",
                    &res.r, &res.s, &n_r, &kmax, &nn) != 5)
      throw parse_error("bad tree header", lineno);
    res.k_max = kmax;
    nodes = nn;
    res.tree.n_leaves = n_r;
    res.tree.parent.assign(nodes, kNone);
    res.tree.level.assign(nodes, 0);
    res.leaf_verts.assign(static_cast<std::size_t>(n_r) * res.r, 0);
  }
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    long long id, par;
    double lv;
    char rest[4096];
    if (std::sscanf(line.c_str(), "%lld %lld %lf %4095s", &id, &par, &lv,
                    rest) != 4)
      throw parse_error("bad tree node line", lineno);
    if (id < 0 || id >= nodes) throw parse_error("node id out of range", lineno);
    res.tree.parent[id] = par < 0 ? kNone : par;
    res.tree.level[id] = lv;
    if (id < res.tree.n_leaves) {
      const char* p = rest;
      for (int i = 0; i < res.r; ++i) {
        char* end = nullptr;
        res.leaf_verts[id * res.r + i] = std::strtoll(p, &end, 10);
        if (end == p) throw parse_error("bad leaf vertex tuple", lineno);
        p = *end == ',' ? end + 1 : end;
      }
    }
  }
  return res;
}

// Canonical set-partition form of the nuclei at a cut level: members sorted
// within groups, groups sorted by first member.
inline std::vector<std::vector<cid>> nuclei_partition(
    const std::vector<Nucleus>& nuclei) {
  std::vector<std::vector<cid>> part;
  part.reserve(nuclei.size());
  for (const auto& nu : nuclei) {
    auto g = nu.member_r_cliques;
    std::sort(g.begin(), g.end());
    part.push_back(std::move(g));
  }
  std::sort(part.begin(), part.end());
  return part;
}

}  // namespace nucleus
