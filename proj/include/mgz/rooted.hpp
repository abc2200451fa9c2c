// Copyright 2026 the mgz developers.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "mgz/errors.hpp"
#include "mgz/isomorphism.hpp"
#include "mgz/marked_graph.hpp"
#include "mgz/numeric.hpp"

namespace mgz {

/// Canonical byte string identifying the isomorphism class of a rooted
/// marked graph. Layout: version byte, intrinsic depth (root eccentricity),
/// vertex count, |Theta|, |Xi|, vertex-mark bytes in canonical order, then
/// column-major upper-triangular adjacency symbols (0 = no edge, else
/// 1 + mark_toward_later*|Xi| + mark_toward_earlier). Lexicographic byte
/// order is the total order used everywhere downstream.
struct RootedClassCode {
  std::vector<std::uint8_t> bytes;

  auto operator<=>(const RootedClassCode&) const = default;

  int version() const { return bytes.at(0); }
  int depth() const { return bytes.at(1); }
  int num_vertices() const { return bytes.at(2); }
  int num_vertex_marks() const { return bytes.at(3); }
  int num_edge_marks() const { return bytes.at(4); }

  std::string hex() const {
    static const char* digits = "0123456789abcdef";
    std::string s;
    for (std::uint8_t b : bytes) {
      s.push_back(digits[b >> 4]);
      s.push_back(digits[b & 0xf]);
    }
    return s;
  }

  static RootedClassCode from_hex(const std::string& s) {
    require(s.size() % 2 == 0, errc::parse_error, "odd hex length");
    auto nib = [](char c) -> int {
      if (c >= '0' && c <= '9') return c - '0';
      if (c >= 'a' && c <= 'f') return c - 'a' + 10;
      if (c >= 'A' && c <= 'F') return c - 'A' + 10;
      raise(errc::parse_error, "bad hex digit");
    };
    RootedClassCode c;
    for (std::size_t i = 0; i < s.size(); i += 2)
      c.bytes.push_back(static_cast<std::uint8_t>(nib(s[i]) * 16 + nib(s[i + 1])));
    return c;
  }
};

/// Connected marked graph with a distinguished root, known to lie within
/// `depth` of every vertex (depth = -1 means untruncated).
struct RootedMarkedGraph {
  MarkedGraph graph;
  int root = 1;
  int depth = -1;

  static RootedMarkedGraph make(MarkedGraph g, int root, int depth = -1) {
    require(root >= 1 && root <= g.n(), errc::vertex_out_of_range, "root out of range");
    const auto dist = bfs_distances(g, root);
    int ecc = 0;
    for (int v = 1; v <= g.n(); ++v) {
      require(dist[v - 1] >= 0, errc::parameter_out_of_range, "rooted graph must be connected");
      ecc = std::max(ecc, dist[v - 1]);
    }
    require(depth < 0 || ecc <= depth, errc::parameter_out_of_range,
            "vertex beyond declared depth");
    return {std::move(g), root, depth};
  }
};

/// (G, o)_h: induced subgraph on the vertices within distance h of o.
inline RootedMarkedGraph truncate(const MarkedGraph& g, int o, int h) {
  require(o >= 1 && o <= g.n(), errc::vertex_out_of_range, "root out of range");
  require(h >= 0, errc::parameter_out_of_range, "negative depth");
  const auto dist = bfs_distances(g, o);
  std::vector<int> keep;
  for (int v = 1; v <= g.n(); ++v)
    if (dist[v - 1] >= 0 && dist[v - 1] <= h) keep.push_back(v);
  const int new_root =
      static_cast<int>(std::lower_bound(keep.begin(), keep.end(), o) - keep.begin()) + 1;
  return {induced_subgraph(g, keep), new_root, h};
}

inline bool rooted_isomorphic(const RootedMarkedGraph& a, const RootedMarkedGraph& b) {
  return rooted_isomorphic_components(a.graph, a.root, b.graph, b.root);
}

namespace detail {

/// Minimal serialization over root-fixing orderings: BFS layering, iterative
/// partition refinement, then backtracking over the remaining cell orderings
/// with incremental prefix pruning. Exponential worst case, accepted for the
/// depth/degree-bounded neighborhoods this runs on.
inline std::vector<std::uint8_t> canonical_bytes(const MarkedGraph& g, int root, int second,
                                                 std::uint8_t version) {
  const int m = g.n();
  require(m <= 255, errc::parameter_out_of_range, "rooted neighborhood too large to encode");
  require(g.num_vertex_marks() <= 127 && g.num_edge_marks() <= 15, errc::parameter_out_of_range,
          "mark alphabet too large to encode");
  const int nxi = g.num_edge_marks();
  const auto layer = bfs_distances(g, root);
  int ecc = 0;
  for (int v = 1; v <= m; ++v) {
    require(layer[v - 1] >= 0, errc::parameter_out_of_range, "rooted graph must be connected");
    ecc = std::max(ecc, layer[v - 1]);
  }

  // initial colors: (layer, vertex mark, second-root tag)
  std::vector<int> color(static_cast<std::size_t>(m));
  {
    std::vector<std::array<int, 3>> keys(static_cast<std::size_t>(m));
    for (int v = 1; v <= m; ++v)
      keys[v - 1] = {layer[v - 1], g.vertex_mark(v), v == second ? 1 : 0};
    auto sorted = keys;
    std::sort(sorted.begin(), sorted.end());
    sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
    for (int v = 1; v <= m; ++v)
      color[v - 1] = static_cast<int>(
          std::lower_bound(sorted.begin(), sorted.end(), keys[v - 1]) - sorted.begin());
  }

  // refinement by multiset of (directed mark pair, neighbor color) signatures
  using Sig = std::pair<int, std::vector<std::array<int, 3>>>;
  int ncolors = 0;
  for (int c : color) ncolors = std::max(ncolors, c + 1);
  while (true) {
    std::vector<Sig> sig(static_cast<std::size_t>(m));
    for (int v = 1; v <= m; ++v) {
      std::vector<std::array<int, 3>> nb;
      for (int w : g.neighbors(v)) nb.push_back({g.xi(w, v), g.xi(v, w), color[w - 1]});
      std::sort(nb.begin(), nb.end());
      sig[v - 1] = {color[v - 1], std::move(nb)};
    }
    std::vector<Sig> sorted = sig;
    std::sort(sorted.begin(), sorted.end());
    sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
    if (static_cast<int>(sorted.size()) == ncolors) break;
    ncolors = static_cast<int>(sorted.size());
    for (int v = 1; v <= m; ++v)
      color[v - 1] = static_cast<int>(
          std::lower_bound(sorted.begin(), sorted.end(), sig[v - 1]) - sorted.begin());
  }

  std::vector<std::vector<int>> cells(static_cast<std::size_t>(ncolors));
  for (int v = 1; v <= m; ++v) cells[color[v - 1]].push_back(v);

  // body = mark bytes (fixed: equal within each cell) + adjacency columns
  std::vector<std::uint8_t> mark_bytes;
  for (const auto& cell : cells)
    for (int v : cell)
      mark_bytes.push_back(static_cast<std::uint8_t>(
          version == 2 ? g.vertex_mark(v) * 2 + (v == second ? 1 : 0) : g.vertex_mark(v)));

  std::vector<int> order;
  order.reserve(static_cast<std::size_t>(m));
  std::vector<char> used(static_cast<std::size_t>(m + 1), 0);
  std::vector<std::uint8_t> adj;      // column-major symbols for current partial order
  std::vector<std::uint8_t> best;     // best complete adjacency byte string
  bool have_best = false;

  auto column_of = [&](int v) {
    std::vector<std::uint8_t> col(order.size());
    for (std::size_t i = 0; i < order.size(); ++i) {
      const int u = order[i];
      col[i] = g.has_edge(u, v)
                   ? static_cast<std::uint8_t>(1 + g.xi(u, v) * nxi + g.xi(v, u))
                   : 0;
    }
    return col;
  };

  // strictly_better: adj is already lexicographically below best
  auto rec = [&](auto&& self, std::size_t cell_idx, std::size_t pos_in_cell,
                 bool strictly_better) -> void {
    if (cell_idx == cells.size()) {
      if (!have_best || strictly_better) {
        best = adj;
        have_best = true;
      }
      return;
    }
    if (pos_in_cell == cells[cell_idx].size()) {
      self(self, cell_idx + 1, 0, strictly_better);
      return;
    }
    for (int v : cells[cell_idx]) {
      if (used[v]) continue;
      auto col = column_of(v);
      bool better = strictly_better, prune = false;
      if (have_best && !strictly_better) {
        for (std::size_t i = 0; i < col.size(); ++i) {
          const std::uint8_t b = best[adj.size() + i];
          if (col[i] < b) {
            better = true;
            break;
          }
          if (col[i] > b) {
            prune = true;
            break;
          }
        }
      }
      if (prune) continue;
      used[v] = 1;
      order.push_back(v);
      const std::size_t saved = adj.size();
      adj.insert(adj.end(), col.begin(), col.end());
      self(self, cell_idx, pos_in_cell + 1, better);
      adj.resize(saved);
      order.pop_back();
      used[v] = 0;
    }
  };
  rec(rec, 0, 0, false);

  std::vector<std::uint8_t> out{version, static_cast<std::uint8_t>(ecc),
                                static_cast<std::uint8_t>(m),
                                static_cast<std::uint8_t>(g.num_vertex_marks()),
                                static_cast<std::uint8_t>(g.num_edge_marks())};
  out.insert(out.end(), mark_bytes.begin(), mark_bytes.end());
  out.insert(out.end(), best.begin(), best.end());
  return out;
}

}  // namespace detail

inline RootedClassCode canonical_code(const RootedMarkedGraph& r) {
  return {detail::canonical_bytes(r.graph, r.root, 0, 1)};
}

/// Canonical code of the radius-bounded view of (component, o, v) with two
/// distinguished vertices; used by the involution-invariance check.
inline RootedClassCode pair_code(const MarkedGraph& g, int o, int v, int radius) {
  require(radius >= 1, errc::parameter_out_of_range, "pair code needs radius >= 1");
  const auto dist = bfs_distances(g, o);
  require(v >= 1 && v <= g.n() && dist[v - 1] >= 0 && dist[v - 1] <= radius,
          errc::vertex_out_of_range, "second vertex outside the radius view");
  std::vector<int> keep;
  for (int w = 1; w <= g.n(); ++w)
    if (dist[w - 1] >= 0 && dist[w - 1] <= radius) keep.push_back(w);
  auto rank = [&](int w) {
    return static_cast<int>(std::lower_bound(keep.begin(), keep.end(), w) - keep.begin()) + 1;
  };
  return {detail::canonical_bytes(induced_subgraph(g, keep), rank(o), rank(v), 2)};
}

/// Rebuilds a representative rooted graph (root = vertex 1) from a version-1
/// class code.
inline RootedMarkedGraph decode_class(const RootedClassCode& code) {
  const auto& b = code.bytes;
  require(b.size() >= 5, errc::parse_error, "class code too short");
  require(b[0] == 1, errc::unsupported_version, "not a rooted class code");
  const int depth = b[1], m = b[2], ntheta = b[3], nxi = b[4];
  require(m >= 1 && ntheta >= 1 && nxi >= 1, errc::parse_error, "bad class code header");
  const std::size_t expect = 5 + static_cast<std::size_t>(m) +
                             static_cast<std::size_t>(m) * (m - 1) / 2;
  require(b.size() == expect, errc::parse_error, "class code length mismatch");
  std::vector<int> tau(b.begin() + 5, b.begin() + 5 + m);
  std::vector<EdgeSpec> edges;
  std::size_t p = 5 + static_cast<std::size_t>(m);
  for (int t = 2; t <= m; ++t)
    for (int i = 1; i < t; ++i) {
      const int sym = b[p++];
      if (sym == 0) continue;
      require(sym <= nxi * nxi, errc::parse_error, "bad adjacency symbol");
      edges.push_back({i, t, (sym - 1) / nxi, (sym - 1) % nxi});
    }
  auto g = MarkedGraph::build(MarkSets::indexed(ntheta, nxi), m, std::move(tau), edges);
  return RootedMarkedGraph::make(std::move(g), 1, depth);
}

/// Codes of (G,o)_h for h = 0..H; `saturated` means the last code already
/// covers the whole component of o. H = -1 profiles until saturation.
struct DepthProfile {
  std::vector<RootedClassCode> codes;
  bool saturated = false;

  int max_depth() const { return static_cast<int>(codes.size()) - 1; }
  const RootedClassCode& key() const { return codes.back(); }
  const RootedClassCode& at(int h) const {
    if (h > max_depth()) {
      require(saturated, errc::depth_profile_mismatch, "profile does not cover requested depth");
      return codes.back();
    }
    return codes[static_cast<std::size_t>(h)];
  }
};

inline DepthProfile depth_profile(const MarkedGraph& g, int o, int H = -1) {
  const auto dist = bfs_distances(g, o);
  int ecc = 0;
  for (int v = 1; v <= g.n(); ++v) ecc = std::max(ecc, dist[v - 1]);
  DepthProfile p;
  const int stop = (H < 0) ? ecc : std::min(H, ecc);
  p.saturated = (H < 0) || (ecc <= H);
  for (int h = 0; h <= stop; ++h) p.codes.push_back(canonical_code(truncate(g, o, h)));
  return p;
}

/// d̄_* through finite depth profiles: 1/(1+ĥ) where ĥ is the deepest
/// agreement. Codes equal through the common horizon H report 0 unless
/// exactly one side is saturated within H, in which case the distance is
/// exactly 1/(1+H).
inline Rat class_metric(const DepthProfile& a, const DepthProfile& b) {
  if (a.saturated && b.saturated) {
    const int limit = std::max(a.max_depth(), b.max_depth());
    if (a.at(limit) == b.at(limit)) return Rat(0);
    int agree = -1;
    for (int h = 0; h <= limit && a.at(h) == b.at(h); ++h) agree = h;
    return agree < 0 ? Rat(1) : Rat(1, 1 + agree);
  }
  int horizon;
  if (a.saturated)
    horizon = b.max_depth();
  else if (b.saturated)
    horizon = a.max_depth();
  else {
    require(a.max_depth() == b.max_depth(), errc::depth_profile_mismatch,
            "profiles cover different depth ranges");
    horizon = a.max_depth();
  }
  int agree = -1;
  for (int h = 0; h <= horizon && a.at(h) == b.at(h); ++h) agree = h;
  if (agree < 0) return Rat(1);
  if (agree == horizon) {
    const bool exact_boundary = (a.saturated && a.max_depth() <= horizon) ||
                                (b.saturated && b.max_depth() <= horizon);
    return exact_boundary ? Rat(1, 1 + horizon) : Rat(0);
  }
  return Rat(1, 1 + agree);
}

/// All isomorphism classes of rooted marked graphs with depth <= k and max
/// degree <= delta, sorted by code. Generated by exhaustive construction
/// over <= V_max labeled vertices with degree pruning, deduplicated via
/// canonical_code. Gated by a work estimate against `budget`.
inline std::vector<RootedClassCode> enumerate_classes(const MarkSets& marks, int k, int delta,
                                                      const Int& budget = Int(1) << 26) {
  marks.validate();
  require(k >= 0 && delta >= 0, errc::parameter_out_of_range, "negative class parameters");
  const int ntheta = marks.num_vertex_marks(), nxi = marks.num_edge_marks();

  int vmax = 1;
  if (k >= 1 && delta >= 1) {
    if (delta == 1)
      vmax = 2;
    else {
      Int v = 1, layer = delta;
      for (int t = 0; t < k; ++t) {
        v += layer;
        layer *= delta - 1;
      }
      require(v <= 255, errc::budget_exceeded, "class neighborhoods exceed code capacity");
      vmax = v.convert_to<int>();
    }
  }
  {
    Int work = 0;
    for (int m = 1; m <= vmax; ++m) {
      Int adj = 1;
      for (int s = 0; s < m * (m - 1) / 2; ++s) adj *= (1 + nxi * nxi);
      Int tau = 1;
      for (int t = 0; t < m; ++t) tau *= ntheta;
      work += adj * tau;
    }
    require(work <= budget, errc::budget_exceeded, "class enumeration work above budget");
  }

  std::set<RootedClassCode> out;
  for (int m = 1; m <= vmax; ++m) {
    std::vector<std::pair<int, int>> slots;
    for (int i = 1; i <= m; ++i)
      for (int j = i + 1; j <= m; ++j) slots.emplace_back(i, j);
    std::vector<int> sym(slots.size(), 0);
    std::vector<int> deg(static_cast<std::size_t>(m) + 1, 0);
    std::vector<std::vector<int>> adj(static_cast<std::size_t>(m) + 1);

    auto emit = [&]() {
      if (k > 1) {
        // connected to the root within depth k
        std::vector<int> dist(static_cast<std::size_t>(m) + 1, -1);
        dist[1] = 0;
        std::vector<int> queue{1};
        for (std::size_t q = 0; q < queue.size(); ++q)
          for (int w : adj[static_cast<std::size_t>(queue[q])])
            if (dist[static_cast<std::size_t>(w)] < 0) {
              dist[static_cast<std::size_t>(w)] = dist[static_cast<std::size_t>(queue[q])] + 1;
              queue.push_back(w);
            }
        for (int v = 1; v <= m; ++v)
          if (dist[static_cast<std::size_t>(v)] < 0 || dist[static_cast<std::size_t>(v)] > k)
            return;
      }
      std::vector<EdgeSpec> edges;
      for (std::size_t s = 0; s < slots.size(); ++s)
        if (sym[s] != 0)
          edges.push_back({slots[s].first, slots[s].second, (sym[s] - 1) / nxi,
                           (sym[s] - 1) % nxi});
      std::vector<int> tau(static_cast<std::size_t>(m), 0);
      while (true) {
        auto g = MarkedGraph::build(marks, m, tau, edges);
        out.insert(canonical_code(RootedMarkedGraph::make(std::move(g), 1)));
        int t = m - 1;
        while (t >= 0 && tau[t] == ntheta - 1) tau[t--] = 0;
        if (t < 0) break;
        ++tau[t];
      }
    };

    auto rec = [&](auto&& self, std::size_t s) -> void {
      if (s == slots.size()) {
        emit();
        return;
      }
      const auto [i, j] = slots[s];
      // depth <= 1 forces every vertex adjacent to the root
      const int lo = (k <= 1 && i == 1) ? 1 : 0;
      for (int a = lo; a <= nxi * nxi; ++a) {
        if (a > 0 && (deg[i] >= delta || deg[j] >= delta)) break;
        sym[s] = a;
        if (a > 0) {
          ++deg[i];
          ++deg[j];
          adj[static_cast<std::size_t>(i)].push_back(j);
          adj[static_cast<std::size_t>(j)].push_back(i);
        }
        self(self, s + 1);
        if (a > 0) {
          --deg[i];
          --deg[j];
          adj[static_cast<std::size_t>(i)].pop_back();
          adj[static_cast<std::size_t>(j)].pop_back();
        }
        sym[s] = 0;
      }
    };
    rec(rec, 0);
  }
  return {out.begin(), out.end()};
}

/// Shared, ordered A_{k,delta} enumeration with a code -> position index.
struct ClassTable {
  MarkSets marks;
  int k = 0;
  int delta = 0;
  std::vector<RootedClassCode> codes;
  std::map<RootedClassCode, int> index;

  static ClassTable build(const MarkSets& marks, int k, int delta,
                          const Int& budget = Int(1) << 26) {
    ClassTable t;
    t.marks = marks;
    t.k = k;
    t.delta = delta;
    t.codes = enumerate_classes(marks, k, delta, budget);
    for (std::size_t i = 0; i < t.codes.size(); ++i)
      t.index.emplace(t.codes[i], static_cast<int>(i));
    return t;
  }

  int size() const { return static_cast<int>(codes.size()); }
  int find(const RootedClassCode& c) const {
    const auto it = index.find(c);
    return it == index.end() ? -1 : it->second;
  }
};

}  // namespace mgz
