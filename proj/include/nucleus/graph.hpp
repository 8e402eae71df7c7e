#pragma once

#include <algorithm>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "nucleus/common.hpp"

namespace nucleus {

// Immutable undirected simple graph in CSR form. Neighbor lists are strictly
// sorted; adjacency is symmetric; no self-loops or duplicate edges.
struct Graph {
  vid n = 0;
  std::int64_t m = 0;                // undirected edge count
  std::vector<std::int64_t> offset;  // size n+1
  std::vector<vid> adj;              // size 2m, sorted per vertex

  std::span<const vid> neighbors(vid v) const {
    return {adj.data() + offset[v], adj.data() + offset[v + 1]};
  }
  std::int64_t degree(vid v) const { return offset[v + 1] - offset[v]; }
  bool has_edge(vid u, vid v) const {
    auto nb = neighbors(u);
    return std::binary_search(nb.begin(), nb.end(), v);
  }
  std::int64_t bytes() const {
    return static_cast<std::int64_t>(offset.size() * sizeof(std::int64_t) +
                                     adj.size() * sizeof(vid));
  }
};

// Builds the canonical Graph from a raw edge list. Self-loops are dropped,
// duplicates (in either direction) merged, neighbor lists sorted.
inline Graph build_graph(vid n, std::vector<std::pair<vid, vid>> edges) {
  for (auto& e : edges)
    if (e.first > e.second) std::swap(e.first, e.second);
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  std::erase_if(edges, [](const auto& e) { return e.first == e.second; });

  Graph g;
  g.n = n;
  g.m = static_cast<std::int64_t>(edges.size());
  std::vector<std::int64_t> deg(n, 0);
  for (const auto& [u, v] : edges) {
    ++deg[u];
    ++deg[v];
  }
  g.offset.assign(n + 1, 0);
  for (vid v = 0; v < n; ++v) g.offset[v + 1] = g.offset[v] + deg[v];
  g.adj.resize(2 * g.m);
  std::vector<std::int64_t> cursor(g.offset.begin(), g.offset.end() - 1);
  for (const auto& [u, v] : edges) {
    g.adj[cursor[u]++] = v;
    g.adj[cursor[v]++] = u;
  }
  for (vid v = 0; v < n; ++v)
    std::sort(g.adj.begin() + g.offset[v], g.adj.begin() + g.offset[v + 1]);
  return g;
}

// Reads a SNAP-style edge list: '#' lines are comments, data lines hold two
// integer endpoints. Vertices are relabeled densely in order of first
// appearance so outputs are reproducible.
inline Graph load_edge_list(std::istream& in) {
  std::vector<std::pair<vid, vid>> edges;
  std::unordered_map<std::int64_t, vid> label;
  std::string line;
  std::size_t lineno = 0;
  auto intern = [&](std::int64_t raw) {
    auto [it, fresh] = label.try_emplace(raw, static_cast<vid>(label.size()));
    (void)fresh;
    return it->second;
  };
  while (std::getline(in, line)) {
    ++lineno;
    std::size_t i = 0;
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i])))
      ++i;
    if (i >= line.size() || line[i] == '#') continue;
    const char* p = line.c_str() + i;
    char* end = nullptr;
    std::int64_t a = std::strtoll(p, &end, 10);
    if (end == p) throw parse_error("expected integer vertex id", lineno);
    p = end;
    std::int64_t b = std::strtoll(p, &end, 10);
    if (end == p) throw parse_error("expected second vertex id", lineno);
    while (*end != '\0') {
      if (!std::isspace(static_cast<unsigned char>(*end)))
        throw parse_error("trailing garbage after edge", lineno);
      ++end;
    }
    edges.emplace_back(intern(a), intern(b));
  }
  return build_graph(static_cast<vid>(label.size()), std::move(edges));
}

inline Graph load_edge_list_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return load_edge_list(in);
}

// Binary adjacency cache. Little-endian 64-bit header and payload:
// magic, version, n, m, offsets[n+1], adj[2m].
inline constexpr std::uint64_t kGraphMagic = 0x4e55434c47524148ull;  // "NUCLGRAH"
inline constexpr std::uint64_t kGraphVersion = 1;

inline void save_graph_bin(const Graph& g, std::ostream& out) {
  auto put = [&](std::uint64_t x) {
    unsigned char b[8];
    for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>(x >> (8 * i));
    out.write(reinterpret_cast<const char*>(b), 8);
  };
  put(kGraphMagic);
  put(kGraphVersion);
  put(static_cast<std::uint64_t>(g.n));
  put(static_cast<std::uint64_t>(g.m));
  for (auto o : g.offset) put(static_cast<std::uint64_t>(o));
  for (auto v : g.adj) put(static_cast<std::uint64_t>(v));
}

inline Graph load_graph_bin(std::istream& in) {
  auto get = [&]() {
    unsigned char b[8];
    in.read(reinterpret_cast<char*>(b), 8);
    if (!in) throw std::runtime_error("truncated graph cache");
    std::uint64_t x = 0;
    for (int i = 0; i < 8; ++i) x |= static_cast<std::uint64_t>(b[i]) << (8 * i);
    return x;
  };
  if (get() != kGraphMagic) throw std::runtime_error("bad graph cache magic");
  if (get() != kGraphVersion) throw std::runtime_error("bad graph cache version");
  Graph g;
  g.n = static_cast<vid>(get());
  g.m = static_cast<std::int64_t>(get());
  g.offset.resize(g.n + 1);
  for (auto& o : g.offset) o = static_cast<std::int64_t>(get());
  g.adj.resize(2 * g.m);
  for (auto& v : g.adj) v = static_cast<vid>(get());
  return g;
}

// Sniffs the binary cache magic; falls back to text edge list.
inline Graph load_graph_any(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  unsigned char b[8] = {0};
  in.read(reinterpret_cast<char*>(b), 8);
  std::uint64_t x = 0;
  for (int i = 0; i < 8; ++i) x |= std::uint64_t(b[i]) << (8 * i);
  in.seekg(0);
  if (in.gcount() == 8 && x == kGraphMagic) return load_graph_bin(in);
  in.close();
  return load_edge_list_file(path);
}

// Acyclic low out-degree orientation: edges point from lower to higher rank.
struct OrientedGraph {
  const Graph* base = nullptr;
  std::vector<std::int64_t> rank;  // position of each vertex in the order
  std::vector<std::int64_t> out_offset;
  std::vector<vid> out_adj;  // sorted by vertex id within each list
  std::int64_t max_outdeg = 0;

  std::span<const vid> out_neighbors(vid v) const {
    return {out_adj.data() + out_offset[v], out_adj.data() + out_offset[v + 1]};
  }
  std::int64_t outdeg(vid v) const { return out_offset[v + 1] - out_offset[v]; }
  std::int64_t bytes() const {
    return static_cast<std::int64_t>(
        rank.size() * sizeof(std::int64_t) +
        out_offset.size() * sizeof(std::int64_t) + out_adj.size() * sizeof(vid));
  }
};

// Degeneracy order by repeated minimum-degree removal, peeled in rounds:
// each round removes every vertex of current minimum degree (ties broken by
// id through round-major/id-minor ranks). Out-degree of each vertex is then
// bounded by the degeneracy. Deterministic for a given graph.
inline OrientedGraph orient(const Graph& g) {
  const vid n = g.n;
  std::vector<std::int64_t> deg(n);
  std::int64_t maxdeg = 0;
  for (vid v = 0; v < n; ++v) {
    deg[v] = g.degree(v);
    maxdeg = std::max(maxdeg, deg[v]);
  }

  std::vector<std::vector<vid>> bucket(maxdeg + 1);
  for (vid v = 0; v < n; ++v) bucket[deg[v]].push_back(v);
  std::vector<char> removed(n, 0);
  std::vector<std::int64_t> order_rank(n, -1);

  std::int64_t next_rank = 0;
  std::int64_t cur = 0;
  std::vector<vid> round;
  while (next_rank < n) {
    while (cur <= maxdeg && bucket[cur].empty()) ++cur;
    // lazy deletion: entries whose degree moved on are skipped
    round.clear();
    auto& b = bucket[cur];
    for (vid v : b)
      if (!removed[v] && deg[v] == cur) round.push_back(v);
    b.clear();
    if (round.empty()) continue;
    std::sort(round.begin(), round.end());
    for (vid v : round) {
      removed[v] = 1;
      order_rank[v] = next_rank++;
    }
    for (vid v : round)
      for (vid u : g.neighbors(v))
        if (!removed[u]) {
          if (--deg[u] < cur) deg[u] = cur;  // never below the frontier
          bucket[deg[u]].push_back(u);
        }
  }

  OrientedGraph og;
  og.base = &g;
  og.rank = std::move(order_rank);
  og.out_offset.assign(n + 1, 0);
  for (vid v = 0; v < n; ++v) {
    std::int64_t d = 0;
    for (vid u : g.neighbors(v))
      if (og.rank[v] < og.rank[u]) ++d;
    og.out_offset[v + 1] = d;
    og.max_outdeg = std::max(og.max_outdeg, d);
  }
  for (vid v = 0; v < n; ++v) og.out_offset[v + 1] += og.out_offset[v];
  og.out_adj.resize(og.out_offset[n]);
  for (vid v = 0; v < n; ++v) {
    std::int64_t c = og.out_offset[v];
    for (vid u : g.neighbors(v))
      if (og.rank[v] < og.rank[u]) og.out_adj[c++] = u;
  }
  return og;
}

}  // namespace nucleus
