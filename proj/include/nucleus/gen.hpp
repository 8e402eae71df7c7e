#pragma once

#include <algorithm>
#include <cstdint>
#include <random>
#include <utility>
#include <vector>

#include "nucleus/common.hpp"
#include "nucleus/graph.hpp"

namespace nucleus {
namespace gen {

// Erdos-Renyi G(n, p).
inline Graph gnp(vid n, double p, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::bernoulli_distribution coin(p);
  std::vector<std::pair<vid, vid>> edges;
  for (vid u = 0; u < n; ++u)
    for (vid v = u + 1; v < n; ++v)
      if (coin(rng)) edges.emplace_back(u, v);
  return build_graph(n, std::move(edges));
}

// Preferential attachment: each new vertex attaches to m sampled endpoints.
inline Graph barabasi_albert(vid n, int m, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<std::pair<vid, vid>> edges;
  std::vector<vid> endpoints;
  for (vid v = 0; v < std::min<vid>(n, m + 1); ++v)
    for (vid u = 0; u < v; ++u) {
      edges.emplace_back(u, v);
      endpoints.push_back(u);
      endpoints.push_back(v);
    }
  for (vid v = m + 1; v < n; ++v) {
    for (int i = 0; i < m; ++i) {
      vid u = endpoints[std::uniform_int_distribution<std::size_t>(
          0, endpoints.size() - 1)(rng)];
      edges.emplace_back(u, v);
      endpoints.push_back(u);
      endpoints.push_back(v);
    }
  }
  return build_graph(n, std::move(edges));
}

// Union of small cliques with local overlap, the shape of co-authorship
// graphs: each "paper" is a clique over vertices sampled near a random
// center. Produces triangle-rich graphs with a nontrivial nucleus hierarchy.
inline Graph clique_union(vid n, std::int64_t cliques, int k_min, int k_max,
                          std::uint64_t seed, vid spread = 30) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<vid> center_dist(0, n - 1);
  std::uniform_int_distribution<int> size_dist(k_min, k_max);
  std::geometric_distribution<vid> offset_dist(1.0 / static_cast<double>(spread));
  std::vector<std::pair<vid, vid>> edges;
  std::vector<vid> members;
  for (std::int64_t i = 0; i < cliques; ++i) {
    vid center = center_dist(rng);
    int k = size_dist(rng);
    members.clear();
    members.push_back(center);
    while (static_cast<int>(members.size()) < k) {
      vid v = (center + offset_dist(rng) + 1) % n;
      if (std::find(members.begin(), members.end(), v) == members.end())
        members.push_back(v);
    }
    for (std::size_t a = 0; a < members.size(); ++a)
      for (std::size_t b = a + 1; b < members.size(); ++b)
        edges.emplace_back(members[a], members[b]);
  }
  return build_graph(n, std::move(edges));
}

}  // namespace gen
}  // namespace nucleus
