// Copyright 2026 the mgz developers.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cmath>
#include <utility>
#include <vector>

#include "mgz/codec.hpp"
#include "mgz/empirical.hpp"
#include "mgz/errors.hpp"
#include "mgz/marked_graph.hpp"
#include "mgz/numeric.hpp"

namespace mgz {

/// s(d) = d/2 - (d/2) ln d for d > 0, s(0) = 0; maximum 1/2 at d = 1.
inline double s_of(double d) {
  require(!(d < 0), errc::negative_input, "s of negative degree");
  if (d == 0) return 0.0;
  return d / 2 - d / 2 * std::log(d);
}

inline double s_of(const Rat& d) { return s_of(to_double(d)); }

/// Average degree vector (full ordered matrix, symmetric) and root-mark
/// distribution Q.
struct EntropyParams {
  int nxi = 1;
  int ntheta = 1;
  std::vector<Rat> d;  // index x*nxi + x'
  std::vector<Rat> q;  // index theta

  const Rat& d_at(int x, int xp) const { return d[static_cast<std::size_t>(x) * nxi + xp]; }
  Rat& d_at(int x, int xp) { return d[static_cast<std::size_t>(x) * nxi + xp]; }

  void validate() const {
    Rat qs = 0;
    for (const auto& v : q) {
      require(v >= 0, errc::negative_input, "negative probability");
      qs += v;
    }
    require(qs == 1, errc::parameter_out_of_range, "Q must sum to 1");
    for (int x = 0; x < nxi; ++x)
      for (int xp = 0; xp < nxi; ++xp) {
        require(d_at(x, xp) >= 0, errc::negative_input, "negative average degree");
        require(d_at(x, xp) == d_at(xp, x), errc::parameter_out_of_range,
                "average degree vector must be symmetric");
      }
  }

  /// Empirical parameters of a finite graph: d_{x,x} = 2m(x,x)/n, off the
  /// diagonal d_{x,x'} = m(x,x')/n in each direction, Q = u/n.
  static EntropyParams from_counts(long long n, const EdgeMarkCounts& m,
                                   const VertexMarkCounts& u) {
    EntropyParams p;
    p.nxi = m.nxi;
    p.ntheta = static_cast<int>(u.by_mark.size());
    p.d.assign(static_cast<std::size_t>(p.nxi) * p.nxi, Rat(0));
    p.q.assign(static_cast<std::size_t>(p.ntheta), Rat(0));
    for (int x = 0; x < p.nxi; ++x)
      for (int xp = x; xp < p.nxi; ++xp) {
        const Rat v = (x == xp) ? Rat(2 * m.at(x, xp), n) : Rat(m.at(x, xp), n);
        p.d_at(x, xp) = v;
        p.d_at(xp, x) = v;
      }
    for (int t = 0; t < p.ntheta; ++t) p.q[static_cast<std::size_t>(t)] = Rat(u.at(t), n);
    return p;
  }
};

/// S(d) = sum over ordered pairs of s(d_{x,x'}), in nats.
inline double big_s(const EntropyParams& p) {
  double s = 0;
  for (const auto& v : p.d) s += s_of(v);
  return s;
}

/// Shannon entropy of a probability vector, in nats.
inline double entropy_h(const std::vector<Rat>& q) {
  double h = 0;
  for (const auto& v : q) {
    require(v >= 0, errc::negative_input, "negative probability");
    if (v > 0) {
      const double x = to_double(v);
      h -= x * std::log(x);
    }
  }
  return h;
}

/// |G^(n)_{m,u}| exactly: choose the vertex marking, the edge slots, the
/// assignment of unordered mark pairs to slots, and an orientation per edge
/// with distinct marks. Returns 0 when the constraints are infeasible.
inline Int exact_count(long long n, const EdgeMarkCounts& m, const VertexMarkCounts& u) {
  if (u.total() != n) return 0;
  const long long slots = n * (n - 1) / 2;
  const long long total = m.norm1();
  if (total > slots) return 0;
  for (auto c : m.by_pair)
    if (c < 0) return 0;
  for (auto c : u.by_mark)
    if (c < 0) return 0;
  Int count = factorial(n);
  for (auto c : u.by_mark) count /= factorial(c);
  count *= binomial(slots, total);
  Int assign = factorial(total);
  for (auto c : m.by_pair) assign /= factorial(c);
  count *= assign;
  for (int x = 0; x < m.nxi; ++x)
    for (int xp = x + 1; xp < m.nxi; ++xp) count *= Int(1) << m.at(x, xp);
  return count;
}

/// The principal terms of the counting formula: ||m||_1 ln n + nH(Q) + nS(d).
inline double stirling_rhs(long long n, const EdgeMarkCounts& m, const VertexMarkCounts& u) {
  const auto p = EntropyParams::from_counts(n, m, u);
  return static_cast<double>(m.norm1()) * std::log(static_cast<double>(n)) +
         static_cast<double>(n) * entropy_h(p.q) + static_cast<double>(n) * big_s(p);
}

/// ln|G^(n)_{m,u}| minus the principal terms; the o(n) residue tracked by the
/// trend tests.
inline double stirling_residue(long long n, const EdgeMarkCounts& m, const VertexMarkCounts& u) {
  const Int c = exact_count(n, m, u);
  require(c > 0, errc::parameter_out_of_range, "empty family has no residue");
  return ln(c) - stirling_rhs(n, m, u);
}

/// Enumerates G^(n)_{m,u} and feeds each graph to the visitor.
inline void for_each_in_family(const MarkSets& marks, int n, const EdgeMarkCounts& m,
                               const VertexMarkCounts& u,
                               const std::function<bool(const MarkedGraph&)>& visit,
                               const Int& budget = Int(1) << 24) {
  marks.validate();
  require(static_cast<int>(u.by_mark.size()) == marks.num_vertex_marks() && m.nxi ==
              marks.num_edge_marks(),
          errc::parameter_out_of_range, "count vectors sized for different alphabets");
  if (u.total() != n || m.norm1() > static_cast<long long>(n) * (n - 1) / 2) return;
  {
    Int work = 1;
    for (int t = 0; t < n; ++t) work *= marks.num_vertex_marks();
    for (int s = 0; s < n * (n - 1) / 2; ++s) work *= 1 + marks.num_edge_marks() *
                                                          marks.num_edge_marks();
    require(work <= budget, errc::budget_exceeded, "family enumeration above budget");
  }
  const int ntheta = marks.num_vertex_marks(), nxi = marks.num_edge_marks();
  std::vector<std::pair<int, int>> slots;
  for (int i = 1; i <= n; ++i)
    for (int j = i + 1; j <= n; ++j) slots.emplace_back(i, j);
  std::vector<int> tau(static_cast<std::size_t>(n), 0);
  std::vector<long long> u_run(static_cast<std::size_t>(ntheta), 0);
  std::vector<int> sym(slots.size(), 0);
  std::vector<long long> m_run(static_cast<std::size_t>(num_mark_pairs(nxi)), 0);
  long long m_run_total = 0;
  const long long m_total = m.norm1();
  bool keep_going = true;

  auto slot_rec = [&](auto&& self, std::size_t s) -> void {
    if (!keep_going) return;
    if (s == slots.size()) {
      std::vector<EdgeSpec> edges;
      for (std::size_t t = 0; t < slots.size(); ++t)
        if (sym[t] != 0)
          edges.push_back({slots[t].first, slots[t].second, (sym[t] - 1) / nxi,
                           (sym[t] - 1) % nxi});
      keep_going = visit(MarkedGraph::build(marks, n, tau, edges));
      return;
    }
    const long long slots_left = static_cast<long long>(slots.size() - s);
    for (int a = 0; a <= nxi * nxi && keep_going; ++a) {
      int pi = -1;
      if (a > 0) {
        pi = mark_pair_index((a - 1) / nxi, (a - 1) % nxi, nxi);
        if (m_run[pi] >= m.by_pair[pi]) continue;
      }
      if (m_total - m_run_total - (a > 0 ? 1 : 0) > slots_left - 1) continue;
      sym[s] = a;
      if (a > 0) {
        ++m_run[pi];
        ++m_run_total;
      }
      self(self, s + 1);
      if (a > 0) {
        --m_run[pi];
        --m_run_total;
      }
      sym[s] = 0;
    }
  };
  auto tau_rec = [&](auto&& self, int v) -> void {
    if (!keep_going) return;
    if (v > n) {
      slot_rec(slot_rec, 0);
      return;
    }
    for (int th = 0; th < ntheta && keep_going; ++th) {
      if (u_run[th] >= u.at(th)) continue;
      tau[v - 1] = th;
      ++u_run[th];
      self(self, v + 1);
      --u_run[th];
    }
  };
  tau_rec(tau_rec, 1);
}

/// |{ G in G^(n)_{m,u} : dLP(U(G), mu) < eps }| with distances evaluated at
/// the working depth (a lower bound on the true distance, so an upper bound
/// on the ball).
inline Int ball_count(const MarkSets& marks, int n, const EdgeMarkCounts& m,
                      const VertexMarkCounts& u, const Distribution& mu, const Rat& eps,
                      int working_depth = 3, const Int& budget = Int(1) << 24) {
  const int h = mu.full() ? working_depth : std::min(working_depth, mu.depth());
  const Distribution mu_cmp = (mu.full() || mu.depth() > h) ? retruncate(mu, h) : mu;
  Int count = 0;
  for_each_in_family(marks, n, m, u,
                     [&](const MarkedGraph& g) {
                       if (lp_distance_oracle(empirical(g, h), mu_cmp) < eps) ++count;
                       return true;
                     },
                     budget);
  return count;
}

/// The finite-n quantity inside the epsilon-BC-entropy definition, with the
/// counting cap S(d) + H(Q) of the same (m, u).
struct BcEstimate {
  bool empty_ball = false;
  double value = 0;  // (ln ball - ||m||_1 ln n)/n; meaningless when empty_ball
  Int ball_size = 0;
  double cap = 0;
  int working_depth = 3;
};

inline BcEstimate bc_estimate(const MarkSets& marks, int n, const EdgeMarkCounts& m,
                              const VertexMarkCounts& u, const Distribution& mu, const Rat& eps,
                              int working_depth = 3, const Int& budget = Int(1) << 24) {
  BcEstimate e;
  e.working_depth = working_depth;
  e.ball_size = ball_count(marks, n, m, u, mu, eps, working_depth, budget);
  const auto p = EntropyParams::from_counts(n, m, u);
  e.cap = big_s(p) + entropy_h(p.q);
  if (e.ball_size == 0) {
    e.empty_ball = true;  // -infinity sentinel; never a float infinity
    return e;
  }
  e.value = (ln(e.ball_size) - static_cast<double>(m.norm1()) * std::log(n)) / n;
  return e;
}

/// Kraft sum over payload bit lengths; callers assert <= 1.
inline Rat kraft_audit(const std::vector<CompressedBlob>& blobs) {
  Rat sum = 0;
  for (const auto& b : blobs) {
    const auto h = b.header();
    sum += Rat(Int(1), Int(1) << h.payload_bits);
  }
  return sum;
}

struct RateReport {
  int n = 0;
  long long m_norm = 0;
  double nats_used = 0;
  double rate = 0;         // (nats - ||m||_1 ln n)/n
  double upper_bound = 0;  // S(d) + H(Q) of the same graph
};

inline RateReport rate_report(const MarkedGraph& g, const CompressedBlob& blob) {
  RateReport r;
  r.n = g.n();
  const auto [m, u] = g.counts();
  r.m_norm = m.norm1();
  r.nats_used = static_cast<double>(blob.header().payload_bits) * std::log(2.0);
  r.rate = (r.nats_used - static_cast<double>(r.m_norm) * std::log(static_cast<double>(r.n))) /
           r.n;
  const auto p = EntropyParams::from_counts(r.n, m, u);
  r.upper_bound = big_s(p) + entropy_h(p.q);
  return r;
}

}  // namespace mgz
