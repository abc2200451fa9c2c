// Copyright 2026 the mgz developers.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "mgz/bitstream.hpp"
#include "mgz/empirical.hpp"
#include "mgz/errors.hpp"
#include "mgz/marked_graph.hpp"
#include "mgz/numeric.hpp"
#include "mgz/rooted.hpp"

namespace mgz {

struct FirstStepParams {
  MarkSets marks;
  int n = 1;
  int k = 1;
  int delta = 1;
  Int class_budget = Int(1) << 26;
  long long node_budget = 500'000'000;

  void validate() const {
    marks.validate();
    require(n >= 1, errc::parameter_out_of_range, "n must be >= 1");
    require(k >= 0 && delta >= 0, errc::parameter_out_of_range, "k and delta must be >= 0");
  }
};

struct RankedType {
  TypeVector psi;
  Int rank = 0;
  Int w_size = 0;
};

namespace detail {

/// Targets derivable from psi alone; the decoder prunes with the same data
/// the encoder used. Only meaningful for k >= 1 (the root degree is visible).
struct WTargets {
  bool feasible = true;
  std::vector<long long> u;               // per vertex mark
  std::vector<long long> m;               // per unordered mark pair index
  std::vector<std::vector<long long>> nd; // [theta][degree] counts
  long long m_total = 0;
};

inline WTargets w_targets(const TypeVector& psi, const ClassTable& table, int n) {
  const int ntheta = table.marks.num_vertex_marks();
  const int nxi = table.marks.num_edge_marks();
  WTargets t;
  t.u.assign(ntheta, 0);
  t.m.assign(num_mark_pairs(nxi), 0);
  t.nd.assign(ntheta, std::vector<long long>(static_cast<std::size_t>(table.delta) + 1, 0));
  std::vector<std::vector<long long>> ordered(nxi, std::vector<long long>(nxi, 0));
  for (std::size_t c = 0; c < table.codes.size(); ++c) {
    if (psi.counts[c] == 0) continue;
    const auto rep = decode_class(table.codes[c]);
    t.u[rep.graph.vertex_mark(rep.root)] += psi.counts[c];
    if (table.k >= 1) {
      t.nd[rep.graph.vertex_mark(rep.root)][rep.graph.degree(rep.root)] += psi.counts[c];
      for (int x = 0; x < nxi; ++x)
        for (int xp = 0; xp < nxi; ++xp)
          ordered[x][xp] += psi.counts[c] * rep.graph.directed_degree(rep.root, x, xp);
    }
  }
  if (table.k >= 1) {
    for (int x = 0; x < nxi; ++x) {
      if (ordered[x][x] % 2 != 0) t.feasible = false;
      t.m[mark_pair_index(x, x, nxi)] = ordered[x][x] / 2;
      for (int xp = x + 1; xp < nxi; ++xp) {
        if (ordered[x][xp] != ordered[xp][x]) t.feasible = false;
        t.m[mark_pair_index(x, xp, nxi)] = ordered[x][xp];
      }
    }
    for (auto v : t.m) t.m_total += v;
    if (t.m_total > static_cast<long long>(n) * (n - 1) / 2) t.feasible = false;
  }
  return t;
}

}  // namespace detail

namespace detail {

/// Class lookup for neighborhoods seen during enumeration. Balls are keyed
/// by their raw serialization (sorted vertex order) and canonicalized only on
/// a miss; the same local patterns recur constantly across candidates.
class LocalTypeMemo {
 public:
  LocalTypeMemo(const ClassTable& table, const std::vector<std::vector<int>>& adj,
                const std::vector<int>& tau, const std::vector<int>& sym,
                const std::vector<std::vector<int>>& slot_of)
      : table_(table), adj_(adj), tau_(tau), sym_(sym), slot_of_(slot_of) {}

  int class_of(int v) {
    ball_.clear();
    ball_.push_back(v);
    std::size_t lo = 0, hi = 1;
    for (int depth = 1; depth <= table_.k; ++depth) {
      for (std::size_t q = lo; q < hi; ++q)
        for (int w : adj_[static_cast<std::size_t>(ball_[q])])
          if (std::find(ball_.begin(), ball_.end(), w) == ball_.end()) ball_.push_back(w);
      lo = hi;
      hi = ball_.size();
      if (lo == hi) break;
    }
    std::sort(ball_.begin(), ball_.end());
    key_.clear();
    key_.push_back(static_cast<int>(
        std::lower_bound(ball_.begin(), ball_.end(), v) - ball_.begin()));
    for (int w : ball_) key_.push_back(tau_[static_cast<std::size_t>(w - 1)]);
    for (std::size_t i = 0; i < ball_.size(); ++i)
      for (std::size_t j = i + 1; j < ball_.size(); ++j)
        key_.push_back(sym_[static_cast<std::size_t>(
            slot_of_[static_cast<std::size_t>(ball_[i])][static_cast<std::size_t>(ball_[j])])]);
    const auto it = memo_.find(key_);
    if (it != memo_.end()) return it->second;

    const int nxi = table_.marks.num_edge_marks();
    std::vector<int> ball_tau;
    for (int w : ball_) ball_tau.push_back(tau_[static_cast<std::size_t>(w - 1)]);
    std::vector<EdgeSpec> edges;
    std::size_t p = 1 + ball_.size();
    for (std::size_t i = 0; i < ball_.size(); ++i)
      for (std::size_t j = i + 1; j < ball_.size(); ++j) {
        const int a = key_[p++];
        if (a != 0)
          edges.push_back({static_cast<int>(i) + 1, static_cast<int>(j) + 1, (a - 1) / nxi,
                           (a - 1) % nxi});
      }
    auto g = MarkedGraph::build(table_.marks, static_cast<int>(ball_.size()),
                                std::move(ball_tau), edges);
    const int root = key_[0] + 1;
    const int idx = table_.find(canonical_code(truncate(g, root, table_.k)));
    if (idx < 0) throw std::logic_error("class enumeration missed a realized neighborhood");
    memo_.emplace(key_, idx);
    return idx;
  }

 private:
  const ClassTable& table_;
  const std::vector<std::vector<int>>& adj_;
  const std::vector<int>& tau_;
  const std::vector<int>& sym_;
  const std::vector<std::vector<int>>& slot_of_;
  std::map<std::vector<int>, int> memo_;
  std::vector<int> ball_;
  std::vector<int> key_;
};

}  // namespace detail

/// Streams every marked graph on 1..n with max degree <= delta whose type
/// vector equals psi, in lexicographic order of (vertex-mark sequence,
/// row-major upper-triangular slot symbols). The visitor returns false to
/// stop. Generation-with-pruning; worst case exponential, gated by the node
/// budget.
inline void enumerate_W(const TypeVector& psi, const FirstStepParams& params,
                        const ClassTable& table,
                        const std::function<bool(const MarkedGraph&)>& visit) {
  params.validate();
  require(psi.counts.size() == table.codes.size(), errc::parameter_out_of_range,
          "psi keyed to a different class enumeration");
  const int n = params.n;
  const int ntheta = params.marks.num_vertex_marks();
  const int nxi = params.marks.num_edge_marks();
  if (psi.total() != n) return;
  const auto targets = detail::w_targets(psi, table, n);
  if (!targets.feasible) return;

  std::vector<std::pair<int, int>> slots;
  std::vector<std::vector<int>> slot_of(static_cast<std::size_t>(n) + 1,
                                        std::vector<int>(static_cast<std::size_t>(n) + 1, -1));
  for (int i = 1; i <= n; ++i)
    for (int j = i + 1; j <= n; ++j) {
      slot_of[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
          static_cast<int>(slots.size());
      slot_of[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)] =
          static_cast<int>(slots.size());
      slots.emplace_back(i, j);
    }

  std::vector<int> tau(static_cast<std::size_t>(n), 0);
  std::vector<long long> u_run(static_cast<std::size_t>(ntheta), 0);
  std::vector<int> sym(slots.size(), 0);
  std::vector<int> deg(static_cast<std::size_t>(n) + 1, 0);
  std::vector<int> rem(static_cast<std::size_t>(n) + 1, n - 1);  // undecided incident slots
  std::vector<std::vector<int>> adj(static_cast<std::size_t>(n) + 1);
  std::vector<long long> m_run(targets.m.size(), 0);
  std::vector<std::vector<long long>> nd_run(
      static_cast<std::size_t>(ntheta),
      std::vector<long long>(static_cast<std::size_t>(params.delta) + 1, 0));
  long long m_run_total = 0;
  long long nodes = 0;
  bool keep_going = true;

  // a vertex is viable while some reachable final degree still has profile
  // capacity left; finalized vertices were already charged by the nd check
  auto viable = [&](int v) {
    if (rem[static_cast<std::size_t>(v)] == 0) return true;
    const int lo = deg[static_cast<std::size_t>(v)];
    const int hi = std::min(params.delta, lo + rem[static_cast<std::size_t>(v)]);
    const auto& want = targets.nd[static_cast<std::size_t>(tau[static_cast<std::size_t>(v - 1)])];
    const auto& have = nd_run[static_cast<std::size_t>(tau[static_cast<std::size_t>(v - 1)])];
    for (int d = lo; d <= hi; ++d)
      if (have[static_cast<std::size_t>(d)] < want[static_cast<std::size_t>(d)]) return true;
    return false;
  };

  detail::LocalTypeMemo memo(table, adj, tau, sym, slot_of);
  std::vector<long long> leaf_counts(psi.counts.size(), 0);

  auto leaf = [&]() {
    std::fill(leaf_counts.begin(), leaf_counts.end(), 0);
    for (int v = 1; v <= n; ++v) {
      const auto c = static_cast<std::size_t>(memo.class_of(v));
      if (++leaf_counts[c] > psi.counts[c]) return;  // early exit on mismatch
    }
    std::vector<EdgeSpec> edges;
    for (std::size_t s = 0; s < slots.size(); ++s)
      if (sym[s] != 0)
        edges.push_back(
            {slots[s].first, slots[s].second, (sym[s] - 1) / nxi, (sym[s] - 1) % nxi});
    keep_going = visit(MarkedGraph::build(params.marks, n, tau, edges));
  };

  auto slot_rec = [&](auto&& self, std::size_t s) -> void {
    if (!keep_going) return;
    require(++nodes <= params.node_budget, errc::budget_exceeded,
            "type-class enumeration exceeded the node budget");
    if (s == slots.size()) {
      leaf();
      return;
    }
    const auto [i, j] = slots[s];
    const long long slots_left = static_cast<long long>(slots.size()) - static_cast<long long>(s);
    --rem[static_cast<std::size_t>(i)];
    --rem[static_cast<std::size_t>(j)];
    for (int a = 0; a <= nxi * nxi && keep_going; ++a) {
      int pair_idx = -1;
      if (a > 0) {
        if (deg[i] >= params.delta || deg[j] >= params.delta) break;
        pair_idx = mark_pair_index((a - 1) / nxi, (a - 1) % nxi, nxi);
        if (table.k >= 1 && m_run[pair_idx] >= targets.m[pair_idx]) continue;
      }
      // remaining slots must be able to absorb the remaining edge deficit
      if (table.k >= 1 && targets.m_total - m_run_total - (a > 0 ? 1 : 0) > slots_left - 1)
        continue;
      sym[s] = a;
      if (a > 0) {
        ++deg[i];
        ++deg[j];
        ++m_run[pair_idx];
        ++m_run_total;
        adj[static_cast<std::size_t>(i)].push_back(j);
        adj[static_cast<std::size_t>(j)].push_back(i);
      }
      bool pruned = false;
      std::vector<int> finalized;
      if (table.k >= 1 && j == n) {
        finalized.push_back(i);
        if (i == n - 1) finalized.push_back(n);
        for (int v : finalized) {
          auto& cnt = nd_run[tau[v - 1]][deg[v]];
          if (++cnt > targets.nd[tau[v - 1]][deg[v]]) pruned = true;
        }
      }
      if (!pruned && table.k >= 1 && (!viable(i) || !viable(j))) pruned = true;
      if (!pruned) self(self, s + 1);
      for (int v : finalized) --nd_run[tau[v - 1]][deg[v]];
      if (a > 0) {
        --deg[i];
        --deg[j];
        --m_run[pair_idx];
        --m_run_total;
        adj[static_cast<std::size_t>(i)].pop_back();
        adj[static_cast<std::size_t>(j)].pop_back();
      }
      sym[s] = 0;
    }
    ++rem[static_cast<std::size_t>(i)];
    ++rem[static_cast<std::size_t>(j)];
  };

  auto tau_rec = [&](auto&& self, int v) -> void {
    if (!keep_going) return;
    if (v > n) {
      slot_rec(slot_rec, 0);
      return;
    }
    for (int th = 0; th < ntheta && keep_going; ++th) {
      if (u_run[th] >= targets.u[th]) continue;
      tau[v - 1] = th;
      ++u_run[th];
      self(self, v + 1);
      --u_run[th];
    }
  };
  tau_rec(tau_rec, 1);
}

inline std::vector<MarkedGraph> enumerate_W_all(const TypeVector& psi,
                                                const FirstStepParams& params,
                                                const ClassTable& table) {
  std::vector<MarkedGraph> out;
  enumerate_W(psi, params, table, [&](const MarkedGraph& g) {
    out.push_back(g);
    return true;
  });
  return out;
}

inline RankedType rank_in_W(const MarkedGraph& g, const FirstStepParams& params,
                            const ClassTable& table) {
  require(g.max_degree() <= params.delta, errc::degree_bound_violated,
          "graph exceeds the degree cap");
  require(g.n() == params.n, errc::parameter_out_of_range, "graph size != params.n");
  RankedType r;
  r.psi = type_vector(g, table);
  const auto key = g.lex_key();
  bool found = false;
  enumerate_W(r.psi, params, table, [&](const MarkedGraph& cand) {
    if (!found) {
      if (cand.lex_key() == key)
        found = true;
      else
        ++r.rank;
    }
    ++r.w_size;
    return true;
  });
  if (!found) throw std::logic_error("graph not found in its own type class");
  return r;
}

inline MarkedGraph unrank_in_W(const TypeVector& psi, const Int& rank,
                               const FirstStepParams& params, const ClassTable& table) {
  require(rank >= 0, errc::rank_out_of_range, "negative rank");
  Int seen = 0;
  std::optional<MarkedGraph> out;
  enumerate_W(psi, params, table, [&](const MarkedGraph& cand) {
    if (seen == rank) {
      out = cand;
      return false;
    }
    ++seen;
    return true;
  });
  if (!out) {
    if (seen == 0) raise(errc::empty_type_class, "type class is empty");
    raise(errc::rank_out_of_range, "rank beyond the type class size");
  }
  return *out;
}

/// First-step encoding: |A_{k,delta}| count fields of width 1+floor(log2 n)
/// bits in class order, then the W-rank in 1+floor(log2 |W_n|) bits.
inline BitString encode_first_step(const MarkedGraph& g, const FirstStepParams& params,
                                   const ClassTable& table) {
  const auto ranked = rank_in_W(g, params, table);
  BitWriter w;
  const std::size_t count_width = bit_length(Int(params.n));
  for (long long c : ranked.psi.counts) w.put(Int(c), count_width);
  w.put(ranked.rank, bit_length(ranked.w_size));
  return w.take();
}

namespace detail {

inline MarkedGraph decode_first_step_fields(BitReader& r, const FirstStepParams& params,
                                            const ClassTable& table) {
  const std::size_t count_width = bit_length(Int(params.n));
  TypeVector psi;
  psi.n = params.n;
  long long total = 0;
  for (int c = 0; c < table.size(); ++c) {
    const Int v = r.get(count_width);
    psi.counts.push_back(v.convert_to<long long>());
    total += psi.counts.back();
  }
  require(total == params.n, errc::malformed_stream, "type counts do not sum to n");
  // the decoder re-derives |W_n| by running the same enumeration
  Int w_size = 0;
  enumerate_W(psi, params, table, [&](const MarkedGraph&) {
    ++w_size;
    return true;
  });
  require(w_size > 0, errc::malformed_stream, "declared type class is empty");
  const Int rank = r.get(bit_length(w_size));
  require(rank < w_size, errc::malformed_stream, "W rank out of range");
  return unrank_in_W(psi, rank, params, table);
}

}  // namespace detail

inline MarkedGraph decode_first_step(const BitString& bits, const FirstStepParams& params,
                                     const ClassTable& table) {
  BitReader r(bits);
  auto g = detail::decode_first_step_fields(r, params, table);
  require(r.exhausted(), errc::malformed_stream, "trailing bits after first-step stream");
  return g;
}

}  // namespace mgz
