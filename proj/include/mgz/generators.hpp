// Copyright 2026 the mgz developers.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "mgz/empirical.hpp"
#include "mgz/errors.hpp"
#include "mgz/marked_graph.hpp"
#include "mgz/numeric.hpp"
#include "mgz/rooted.hpp"

namespace mgz {

/// Counter-based PRNG: draw i of stream `seed` is
/// mix64(seed + (i+1) * 0x9E3779B97F4A7C15) with the SplitMix64 finalizer.
/// Fixtures generated from (seed, index) are byte-identical across builds.
struct CounterRng {
  std::uint64_t seed = 0;

  std::uint64_t at(std::uint64_t index) const {
    std::uint64_t z = seed + (index + 1) * 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  /// Uniform in [0,1) with 53 random bits.
  double uniform(std::uint64_t index) const {
    return static_cast<double>(at(index) >> 11) * 0x1.0p-53;
  }
};

enum class FamilyKind { cycle, lattice2d, erdos_renyi, bipartite3 };

struct Family {
  FamilyKind kind = FamilyKind::cycle;
  double alpha = 1.0;       // erdos_renyi only
  std::uint64_t seed = 0;   // erdos_renyi only
};

inline MarkedGraph generate(const Family& f, int n) {
  switch (f.kind) {
    case FamilyKind::cycle: {
      require(n >= 3, errc::parameter_out_of_range, "cycle needs n >= 3");
      std::vector<EdgeSpec> edges;
      for (int i = 1; i <= n; ++i) edges.push_back({i, i % n + 1, 0, 0});
      return MarkedGraph::build(MarkSets::indexed(1, 1), n,
                                std::vector<int>(static_cast<std::size_t>(n), 0), edges);
    }
    case FamilyKind::lattice2d: {
      // {-n..n}^2, row-major ids, truncated boundary
      require(n >= 1, errc::parameter_out_of_range, "lattice needs n >= 1");
      const int side = 2 * n + 1;
      auto id = [side](int row, int col) { return row * side + col + 1; };
      std::vector<EdgeSpec> edges;
      for (int row = 0; row < side; ++row)
        for (int col = 0; col < side; ++col) {
          if (row + 1 < side) edges.push_back({id(row, col), id(row + 1, col), 0, 0});
          if (col + 1 < side) edges.push_back({id(row, col), id(row, col + 1), 0, 0});
        }
      return MarkedGraph::build(MarkSets::indexed(1, 1), side * side,
                                std::vector<int>(static_cast<std::size_t>(side) * side, 0),
                                edges);
    }
    case FamilyKind::erdos_renyi: {
      require(n >= 1, errc::parameter_out_of_range, "er needs n >= 1");
      require(f.alpha > 0, errc::parameter_out_of_range, "er needs alpha > 0");
      const double p = f.alpha / n;
      const CounterRng rng{f.seed};
      std::vector<EdgeSpec> edges;
      std::uint64_t slot = 0;
      for (int i = 1; i <= n; ++i)
        for (int j = i + 1; j <= n; ++j, ++slot)
          if (rng.uniform(slot) < p) edges.push_back({i, j, 0, 0});
      return MarkedGraph::build(MarkSets::indexed(1, 1), n,
                                std::vector<int>(static_cast<std::size_t>(n), 0), edges);
    }
    case FamilyKind::bipartite3: {
      require(n >= 3, errc::parameter_out_of_range, "bipartite3 needs n >= 3");
      MarkSets marks;
      marks.vertex_marks = {"R", "B"};
      marks.edge_marks = {"0"};
      std::vector<int> tau(static_cast<std::size_t>(2 * n), 0);
      for (int v = n + 1; v <= 2 * n; ++v) tau[v - 1] = 1;
      auto wrap = [n](int k) {
        const int r = k % n;
        return r == 0 ? n : r;
      };
      std::vector<EdgeSpec> edges;
      for (int i = 1; i <= n; ++i)
        for (int off = 0; off < 3; ++off) edges.push_back({i, n + wrap(i + off), 0, 0});
      return MarkedGraph::build(marks, 2 * n, std::move(tau), edges);
    }
  }
  raise(errc::parameter_out_of_range, "unknown family");
}

struct LimitProb {
  bool exact = true;
  Rat rational = 0;   // meaningful when exact
  double value = 0;   // always set
};

namespace detail {

inline LimitProb exact_prob(const Rat& r) { return {true, r, to_double(r)}; }

inline RootedMarkedGraph center_rooted_path(int h) {
  // 2h+1 vertices, root at the center; the depth-h view of the 2-regular tree
  const int m = 2 * h + 1;
  std::vector<EdgeSpec> edges;
  for (int i = 1; i < m; ++i) edges.push_back({i, i + 1, 0, 0});
  return RootedMarkedGraph::make(
      MarkedGraph::build(MarkSets::indexed(1, 1), m,
                         std::vector<int>(static_cast<std::size_t>(m), 0), edges),
      h + 1, h);
}

inline RootedMarkedGraph lattice_ball(int h) {
  // radius-h L1 ball of Z^2 rooted at the origin, with induced edges
  std::map<std::pair<int, int>, int> id;
  for (int x = -h; x <= h; ++x)
    for (int y = -h; y <= h; ++y)
      if (std::abs(x) + std::abs(y) <= h) id.emplace(std::make_pair(x, y), 0);
  int next = 1;
  for (auto& [xy, v] : id) v = next++;
  std::vector<EdgeSpec> edges;
  for (const auto& [xy, v] : id) {
    const auto right = id.find({xy.first + 1, xy.second});
    if (right != id.end()) edges.push_back({v, right->second, 0, 0});
    const auto up = id.find({xy.first, xy.second + 1});
    if (up != id.end()) edges.push_back({v, up->second, 0, 0});
  }
  auto g = MarkedGraph::build(MarkSets::indexed(1, 1), next - 1,
                              std::vector<int>(static_cast<std::size_t>(next) - 1, 0), edges);
  return RootedMarkedGraph::make(std::move(g), id.at({0, 0}), h);
}

/// Depth-h truncation of the Example-4 limit: levels 0..h with the fixed
/// band structure, marks alternating from the root mark. Hard-coded for
/// h <= 3.
inline RootedMarkedGraph bipartite3_limit_truncation(int h, int root_mark) {
  MarkSets marks;
  marks.vertex_marks = {"R", "B"};
  marks.edge_marks = {"0"};
  std::vector<int> level_size{1};
  for (int l = 1; l <= h; ++l) level_size.push_back(l == 1 ? 3 : 4);
  // vertex id of (level l, position p in 1..size) = base[l] + p
  std::vector<int> base(static_cast<std::size_t>(h) + 1, 0);
  int acc = 0;
  for (int l = 0; l <= h; ++l) {
    base[static_cast<std::size_t>(l)] = acc;
    acc += level_size[static_cast<std::size_t>(l)];
  }
  std::vector<int> tau(static_cast<std::size_t>(acc), 0);
  for (int l = 0; l <= h; ++l)
    for (int p = 1; p <= level_size[static_cast<std::size_t>(l)]; ++p)
      tau[static_cast<std::size_t>(base[static_cast<std::size_t>(l)] + p - 1)] =
          (l % 2 == 0) ? root_mark : 1 - root_mark;
  std::vector<EdgeSpec> edges;
  auto link = [&](int l, int p, int lp, int pp) {
    edges.push_back({base[static_cast<std::size_t>(l)] + p,
                     base[static_cast<std::size_t>(lp)] + pp, 0, 0});
  };
  if (h >= 1)
    for (int p = 1; p <= 3; ++p) link(0, 1, 1, p);
  if (h >= 2) {
    link(1, 1, 2, 1);
    link(1, 1, 2, 2);
    link(1, 2, 2, 2);
    link(1, 2, 2, 3);
    link(1, 3, 2, 3);
    link(1, 3, 2, 4);
  }
  for (int l = 2; l < h; ++l) {
    link(l, 1, l + 1, 1);
    link(l, 1, l + 1, 2);
    link(l, 2, l + 1, 2);
    link(l, 3, l + 1, 3);
    link(l, 4, l + 1, 3);
    link(l, 4, l + 1, 4);
  }
  return RootedMarkedGraph::make(MarkedGraph::build(marks, acc, std::move(tau), edges), 1, h);
}

inline bool is_tree(const MarkedGraph& g) {
  if (g.num_edges() != g.n() - 1) return false;
  const auto d = bfs_distances(g, 1);
  for (int v = 1; v <= g.n(); ++v)
    if (d[v - 1] < 0) return false;
  return true;
}

inline double poisson_pmf(double alpha, long long k) {
  double p = std::exp(-alpha);
  for (long long i = 1; i <= k; ++i) p *= alpha / static_cast<double>(i);
  return p;
}

}  // namespace detail

/// Depth-h truncation of a deterministic family's local weak limit
/// (root_mark selects between the two bipartite3 limit classes).
inline RootedMarkedGraph limit_truncation(const Family& f, int h, int root_mark = 0) {
  require(h >= 0 && h <= 3, errc::unsupported_depth, "limit truncations available for h <= 3");
  switch (f.kind) {
    case FamilyKind::cycle:
      return h == 0 ? RootedMarkedGraph::make(
                          MarkedGraph::build(MarkSets::indexed(1, 1), 1, {0}, {}), 1, 0)
                    : detail::center_rooted_path(h);
    case FamilyKind::lattice2d:
      return detail::lattice_ball(h);
    case FamilyKind::bipartite3:
      return detail::bipartite3_limit_truncation(h, root_mark);
    case FamilyKind::erdos_renyi:
      raise(errc::parameter_out_of_range, "the sparse random limit has no single pattern");
  }
  raise(errc::parameter_out_of_range, "unknown family");
}

/// Probability that the family's local weak limit assigns to the depth-h
/// event class of t. Deterministic families give exact rationals; the
/// Erdős–Rényi limit (Poisson Galton–Watson) gives a real.
inline LimitProb limit_event_probability(const Family& f, const RootedMarkedGraph& t, int h) {
  require(h >= 0 && h <= 3, errc::unsupported_depth, "limit truncations available for h <= 3");
  const auto t_code = canonical_code(truncate(t.graph, t.root, h));
  switch (f.kind) {
    case FamilyKind::cycle: {
      const auto target = h == 0 ? RootedMarkedGraph::make(
                                       MarkedGraph::build(MarkSets::indexed(1, 1), 1, {0}, {}), 1)
                                 : detail::center_rooted_path(h);
      return detail::exact_prob(Rat(t_code == canonical_code(target) ? 1 : 0));
    }
    case FamilyKind::lattice2d: {
      const auto target = detail::lattice_ball(h);
      return detail::exact_prob(Rat(t_code == canonical_code(target) ? 1 : 0));
    }
    case FamilyKind::bipartite3: {
      Rat p = 0;
      for (int root_mark = 0; root_mark < 2; ++root_mark)
        if (t_code == canonical_code(detail::bipartite3_limit_truncation(h, root_mark)))
          p += Rat(1, 2);
      return detail::exact_prob(p);
    }
    case FamilyKind::erdos_renyi: {
      require(h <= 2, errc::unsupported_depth, "er limit supported for h <= 2");
      LimitProb out;
      out.exact = false;
      out.rational = 0;
      const auto cut = truncate(t.graph, t.root, h);
      if (!detail::is_tree(cut.graph)) {
        out.value = 0;
        return out;
      }
      if (h == 0) {
        out.value = 1;
        return out;
      }
      const int d = cut.graph.degree(cut.root);
      if (h == 1) {
        // depth-1 classes are stars; non-star trees cannot match
        out.value = (cut.graph.n() == d + 1) ? detail::poisson_pmf(f.alpha, d) : 0;
        return out;
      }
      // h == 2: root offspring d, children offspring multiset
      std::vector<long long> offspring;
      for (int c : cut.graph.neighbors(cut.root))
        offspring.push_back(cut.graph.degree(c) - 1);
      std::sort(offspring.begin(), offspring.end());
      double p = detail::poisson_pmf(f.alpha, d);
      // multiset symmetry factor d!/prod(mult!)
      double sym = 1;
      for (int i = 1; i <= d; ++i) sym *= i;
      for (std::size_t i = 0; i < offspring.size();) {
        std::size_t j = i;
        double fact = 1;
        while (j < offspring.size() && offspring[j] == offspring[i]) {
          ++j;
          fact *= static_cast<double>(j - i);
        }
        sym /= fact;
        i = j;
      }
      for (long long c : offspring) p *= detail::poisson_pmf(f.alpha, c);
      out.value = p * sym;
      return out;
    }
  }
  raise(errc::parameter_out_of_range, "unknown family");
}

struct TraceRow {
  int n = 0;
  Rat empirical = 0;
  LimitProb limit;
};

/// Per-n empirical event probability next to the limit value.
inline std::vector<TraceRow> convergence_trace(const Family& f, const RootedMarkedGraph& t,
                                               int h, const std::vector<int>& n_list) {
  std::vector<TraceRow> rows;
  const auto limit = limit_event_probability(f, t, h);
  for (int n : n_list) {
    TraceRow row;
    row.n = n;
    row.limit = limit;
    const auto g = generate(f, n);
    row.empirical = event_probability(empirical(g, h), truncate(t.graph, t.root, h));
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace mgz
