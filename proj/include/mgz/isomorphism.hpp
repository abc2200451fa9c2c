// Copyright 2026 the mgz developers.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <vector>

#include "mgz/marked_graph.hpp"

// Backtracking isomorphism tests. These are the oracles the canonical-code
// machinery is validated against, so they deliberately share nothing with it.

namespace mgz {
namespace detail {

inline bool extend_mapping(const MarkedGraph& g1, const MarkedGraph& g2,
                           const std::vector<int>& order, std::size_t k, std::vector<int>& map12,
                           std::vector<char>& used2) {
  if (k == order.size()) return true;
  const int v = order[k];
  if (map12[v - 1] != 0) return extend_mapping(g1, g2, order, k + 1, map12, used2);
  for (int w = 1; w <= g2.n(); ++w) {
    if (used2[w - 1]) continue;
    if (g1.vertex_mark(v) != g2.vertex_mark(w)) continue;
    if (g1.degree(v) != g2.degree(w)) continue;
    bool ok = true;
    for (int u = 1; u <= g1.n() && ok; ++u) {
      const int fu = map12[u - 1];
      if (fu == 0) continue;
      const bool e1 = g1.has_edge(u, v), e2 = g2.has_edge(fu, w);
      if (e1 != e2)
        ok = false;
      else if (e1)
        ok = g1.xi(u, v) == g2.xi(fu, w) && g1.xi(v, u) == g2.xi(w, fu);
    }
    if (!ok) continue;
    map12[v - 1] = w;
    used2[w - 1] = 1;
    if (extend_mapping(g1, g2, order, k + 1, map12, used2)) return true;
    map12[v - 1] = 0;
    used2[w - 1] = 0;
  }
  return false;
}

/// Component-by-component BFS order so every vertex after a component seed
/// has an already-ordered neighbor.
inline std::vector<int> mapping_order(const MarkedGraph& g) {
  std::vector<int> order;
  std::vector<char> seen(static_cast<std::size_t>(g.n()), 0);
  for (int s = 1; s <= g.n(); ++s) {
    if (seen[s - 1]) continue;
    std::vector<int> queue{s};
    seen[s - 1] = 1;
    for (std::size_t q = 0; q < queue.size(); ++q) {
      order.push_back(queue[q]);
      for (int w : g.neighbors(queue[q]))
        if (!seen[w - 1]) {
          seen[w - 1] = 1;
          queue.push_back(w);
        }
    }
  }
  return order;
}

}  // namespace detail

/// True iff a mark- and adjacency-preserving bijection exists. Intended for
/// small graphs; exponential worst case.
inline bool are_isomorphic(const MarkedGraph& g1, const MarkedGraph& g2) {
  if (g1.n() != g2.n() || g1.num_edges() != g2.num_edges()) return false;
  if (g1.num_vertex_marks() != g2.num_vertex_marks() ||
      g1.num_edge_marks() != g2.num_edge_marks())
    return false;
  if (g1.counts() != g2.counts()) return false;
  std::vector<int> map12(static_cast<std::size_t>(g1.n()), 0);
  std::vector<char> used2(static_cast<std::size_t>(g2.n()), 0);
  return detail::extend_mapping(g1, g2, detail::mapping_order(g1), 0, map12, used2);
}

/// Root-preserving isomorphism between the connected components of the two
/// roots.
inline bool rooted_isomorphic_components(const MarkedGraph& g1, int root1, const MarkedGraph& g2,
                                         int root2) {
  if (g1.num_vertex_marks() != g2.num_vertex_marks() ||
      g1.num_edge_marks() != g2.num_edge_marks())
    return false;
  auto comp = [](const MarkedGraph& g, int r) {
    std::vector<int> verts;
    auto d = bfs_distances(g, r);
    for (int v = 1; v <= g.n(); ++v)
      if (d[v - 1] >= 0) verts.push_back(v);
    // relabeling keeps ascending order, so the root's new id is its rank
    const int new_root =
        static_cast<int>(std::lower_bound(verts.begin(), verts.end(), r) - verts.begin()) + 1;
    return std::make_pair(induced_subgraph(g, verts), new_root);
  };
  const auto [c1, r1] = comp(g1, root1);
  const auto [c2, r2] = comp(g2, root2);
  if (c1.n() != c2.n() || c1.num_edges() != c2.num_edges()) return false;
  if (c1.vertex_mark(r1) != c2.vertex_mark(r2) || c1.degree(r1) != c2.degree(r2)) return false;
  std::vector<int> map12(static_cast<std::size_t>(c1.n()), 0);
  std::vector<char> used2(static_cast<std::size_t>(c2.n()), 0);
  map12[r1 - 1] = r2;
  used2[r2 - 1] = 1;
  // BFS order seeded at the root so adjacency constraints bite immediately
  std::vector<int> order{r1};
  std::vector<char> seen(static_cast<std::size_t>(c1.n()), 0);
  seen[r1 - 1] = 1;
  for (std::size_t q = 0; q < order.size(); ++q)
    for (int w : c1.neighbors(order[q]))
      if (!seen[w - 1]) {
        seen[w - 1] = 1;
        order.push_back(w);
      }
  return detail::extend_mapping(c1, c2, order, 0, map12, used2);
}

}  // namespace mgz
