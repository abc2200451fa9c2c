// Copyright 2026 the mgz developers.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <functional>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "mgz/errors.hpp"
#include "mgz/marked_graph.hpp"
#include "mgz/numeric.hpp"
#include "mgz/rooted.hpp"

namespace mgz {

struct Atom {
  DepthProfile profile;
  Rat weight;

  const RootedClassCode& key() const { return profile.key(); }
};

/// Finitely supported probability measure over rooted class codes with exact
/// rational weights. depth = -1 represents full (untruncated) components.
class Distribution {
 public:
  static Distribution from_atoms(int depth, std::vector<Atom> atoms) {
    Distribution d;
    d.depth_ = depth;
    std::map<RootedClassCode, Atom> merged;
    Rat total = 0;
    for (auto& a : atoms) {
      require(a.weight > 0, errc::parameter_out_of_range, "atom weights must be positive");
      total += a.weight;
      auto [it, fresh] = merged.emplace(a.key(), a);
      if (!fresh) it->second.weight += a.weight;
    }
    require(total == 1, errc::parameter_out_of_range, "atom weights must sum to 1");
    for (auto& [k, a] : merged) d.atoms_.push_back(std::move(a));
    return d;
  }

  int depth() const { return depth_; }
  bool full() const { return depth_ < 0; }
  const std::vector<Atom>& atoms() const { return atoms_; }

  Rat weight_of(const RootedClassCode& c) const {
    for (const auto& a : atoms_)
      if (a.key() == c) return a.weight;
    return Rat(0);
  }

  bool operator==(const Distribution& o) const {
    if (depth_ != o.depth_ || atoms_.size() != o.atoms_.size()) return false;
    for (std::size_t i = 0; i < atoms_.size(); ++i)
      if (atoms_[i].key() != o.atoms_[i].key() || atoms_[i].weight != o.atoms_[i].weight)
        return false;
    return true;
  }

  // Text format: optional `# depth h` header, then one line per atom
  // `weight_numerator weight_denominator hex_code`, sorted by code.
  void to_text(std::ostream& os) const {
    os << "# depth " << depth_ << '\n';
    for (const auto& a : atoms_)
      os << boost::multiprecision::numerator(a.weight) << ' '
         << boost::multiprecision::denominator(a.weight) << ' ' << a.key().hex() << '\n';
  }

  std::string to_text() const {
    std::ostringstream os;
    to_text(os);
    return os.str();
  }

  static Distribution parse_text(std::istream& is) {
    int depth = -2;
    std::vector<Atom> atoms;
    std::string line;
    while (std::getline(is, line)) {
      if (auto h = line.find('#'); h != std::string::npos) {
        std::istringstream hs(line.substr(h + 1));
        std::string word;
        int d;
        if (hs >> word >> d && word == "depth") depth = d;
        line.resize(h);
      }
      std::istringstream ls(line);
      std::string num, den, hex;
      if (!(ls >> num >> den >> hex)) continue;
      Atom a;
      a.weight = Rat(Int(num), Int(den));
      const auto rep = decode_class(RootedClassCode::from_hex(hex));
      if (depth == -2) depth = rep.depth;  // fall back to the deepest code seen
      atoms.push_back(std::move(a));
      // profile filled below once depth is final
      atoms.back().profile.codes.push_back(RootedClassCode::from_hex(hex));
    }
    require(depth != -2, errc::parse_error, "empty distribution text");
    for (auto& a : atoms) {
      const auto rep = decode_class(a.profile.codes[0]);
      a.profile = profile_of_truncation(rep, depth);
    }
    return from_atoms(depth, std::move(atoms));
  }

  static Distribution parse_text(const std::string& s) {
    std::istringstream is(s);
    return parse_text(is);
  }

  /// Profile of an atom reconstructed from a stored truncation. If the ball
  /// stopped growing before the declared depth the component is genuinely
  /// exhausted, so the profile is saturated.
  static DepthProfile profile_of_truncation(const RootedMarkedGraph& rep, int declared_depth) {
    if (declared_depth < 0) return depth_profile(rep.graph, rep.root, -1);
    auto p = depth_profile(rep.graph, rep.root, declared_depth);
    p.saturated = p.max_depth() < declared_depth;
    while (p.max_depth() < declared_depth && !p.saturated) p.codes.push_back(p.codes.back());
    return p;
  }

 private:
  int depth_ = 0;
  std::vector<Atom> atoms_;
};

/// U_h(G) for h >= 0, or U(G) when h = -1: root the graph at each vertex,
/// merge by canonical code, weights are multiples of 1/n.
inline Distribution empirical(const MarkedGraph& g, int h) {
  std::map<RootedClassCode, Atom> acc;
  for (int v = 1; v <= g.n(); ++v) {
    auto p = depth_profile(g, v, h);
    const RootedClassCode key = p.key();
    auto [it, fresh] = acc.try_emplace(key);
    if (fresh) it->second.profile = std::move(p);
    it->second.weight += Rat(1, g.n());
  }
  std::vector<Atom> atoms;
  for (auto& [k, a] : acc) atoms.push_back(std::move(a));
  return Distribution::from_atoms(h, std::move(atoms));
}

inline Distribution empirical_full(const MarkedGraph& g) { return empirical(g, -1); }

/// Re-truncates a distribution to a shallower depth, merging atoms.
inline Distribution retruncate(const Distribution& mu, int h) {
  require(h >= 0, errc::parameter_out_of_range, "negative depth");
  require(mu.full() || mu.depth() >= h, errc::depth_too_small,
          "distribution does not cover requested depth");
  std::vector<Atom> atoms;
  for (const auto& a : mu.atoms()) {
    const auto rep = decode_class(a.key());
    const auto cut = truncate(rep.graph, rep.root, h);
    Atom b;
    b.weight = a.weight;
    b.profile = depth_profile(cut.graph, cut.root, h);
    // saturation is inherited: a shallow cut of a saturated atom that kept
    // everything is still the whole component
    b.profile.saturated =
        (a.profile.saturated && a.profile.max_depth() <= h) || b.profile.max_depth() < h;
    atoms.push_back(std::move(b));
  }
  return Distribution::from_atoms(h, std::move(atoms));
}

/// Expected directed root degrees and root-mark probabilities under mu.
struct MeasureStats {
  int nxi = 1;
  int ntheta = 1;
  std::vector<Rat> deg;    // ordered pairs, index x*nxi + x'
  Rat total_deg = 0;
  std::vector<Rat> vtype;  // index theta

  const Rat& deg_at(int x, int xp) const { return deg[static_cast<std::size_t>(x) * nxi + xp]; }
};

inline MeasureStats stats(const Distribution& mu) {
  require(mu.full() || mu.depth() >= 1, errc::depth_too_small, "root degree not visible");
  require(!mu.atoms().empty(), errc::parameter_out_of_range, "empty distribution");
  MeasureStats s;
  const auto first = decode_class(mu.atoms().front().key());
  s.nxi = first.graph.num_edge_marks();
  s.ntheta = first.graph.num_vertex_marks();
  s.deg.assign(static_cast<std::size_t>(s.nxi) * s.nxi, Rat(0));
  s.vtype.assign(static_cast<std::size_t>(s.ntheta), Rat(0));
  for (const auto& a : mu.atoms()) {
    const auto rep = decode_class(a.key());
    for (int x = 0; x < s.nxi; ++x)
      for (int xp = 0; xp < s.nxi; ++xp) {
        const Rat contrib = a.weight * rep.graph.directed_degree(rep.root, x, xp);
        s.deg[static_cast<std::size_t>(x) * s.nxi + xp] += contrib;
        s.total_deg += contrib;
      }
    s.vtype[rep.graph.vertex_mark(rep.root)] += a.weight;
  }
  return s;
}

/// mu(A^h_{(T,i)}): total weight of atoms whose depth-h truncation matches t,
/// via canonical codes.
inline Rat event_probability(const Distribution& mu, const RootedMarkedGraph& t) {
  const int h = t.depth >= 0 ? t.depth : depth_profile(t.graph, t.root, -1).max_depth();
  require(mu.full() || mu.depth() >= h, errc::depth_too_small,
          "distribution shallower than the event depth");
  const auto target = canonical_code(truncate(t.graph, t.root, h));
  Rat p = 0;
  for (const auto& a : mu.atoms())
    if (a.profile.at(h) == target) p += a.weight;
  return p;
}

namespace detail {

struct LpContext {
  std::vector<Rat> mu_w, nu_w;
  // cross[i][j] = metric between mu atom i and nu atom j
  std::vector<std::vector<Rat>> cross;
  std::vector<Rat> candidates;  // {0} + distinct cross distances, sorted
};

inline LpContext lp_context(const Distribution& mu, const Distribution& nu) {
  LpContext c;
  for (const auto& a : mu.atoms()) c.mu_w.push_back(a.weight);
  for (const auto& b : nu.atoms()) c.nu_w.push_back(b.weight);
  c.cross.assign(c.mu_w.size(), std::vector<Rat>(c.nu_w.size()));
  std::vector<Rat> vals{Rat(0)};
  for (std::size_t i = 0; i < c.mu_w.size(); ++i)
    for (std::size_t j = 0; j < c.nu_w.size(); ++j) {
      c.cross[i][j] = class_metric(mu.atoms()[i].profile, nu.atoms()[j].profile);
      vals.push_back(c.cross[i][j]);
    }
  std::sort(vals.begin(), vals.end());
  vals.erase(std::unique(vals.begin(), vals.end()), vals.end());
  c.candidates = std::move(vals);
  return c;
}

/// max over B of mu(B) - nu(B^{<=t}) via subset enumeration with bitmask
/// neighborhoods.
inline Rat worst_gap_side(const std::vector<Rat>& mu_w, const std::vector<Rat>& nu_w,
                          const std::vector<std::vector<Rat>>& dist_mu_nu, const Rat& t) {
  const std::size_t s = mu_w.size();
  std::vector<std::uint32_t> reach(nu_w.size(), 0);  // nu j reachable from which mu atoms
  for (std::size_t j = 0; j < nu_w.size(); ++j)
    for (std::size_t i = 0; i < s; ++i)
      if (dist_mu_nu[i][j] <= t) reach[j] |= (1u << i);
  Rat best = 0;
  for (std::uint32_t b = 1; b < (1u << s); ++b) {
    Rat gap = 0;
    for (std::size_t i = 0; i < s; ++i)
      if (b & (1u << i)) gap += mu_w[i];
    for (std::size_t j = 0; j < nu_w.size(); ++j)
      if (reach[j] & b) gap -= nu_w[j];
    if (gap > best) best = gap;
  }
  return best;
}

}  // namespace detail

/// Exact Lévy–Prokhorov distance by exhaustive Borel-subset check over the
/// finite support. Ground truth for lp_distance.
inline Rat lp_distance_oracle(const Distribution& mu, const Distribution& nu) {
  require(mu.atoms().size() + nu.atoms().size() <= 26, errc::support_too_large,
          "combined support too large for subset oracle");
  require(mu.atoms().size() <= 22 && nu.atoms().size() <= 22, errc::support_too_large,
          "support too large for subset oracle");
  const auto ctx = detail::lp_context(mu, nu);
  std::vector<std::vector<Rat>> tr(ctx.nu_w.size(), std::vector<Rat>(ctx.mu_w.size()));
  for (std::size_t i = 0; i < ctx.mu_w.size(); ++i)
    for (std::size_t j = 0; j < ctx.nu_w.size(); ++j) tr[j][i] = ctx.cross[i][j];
  Rat best = 2;
  for (const auto& t : ctx.candidates) {
    const Rat g1 = detail::worst_gap_side(ctx.mu_w, ctx.nu_w, ctx.cross, t);
    const Rat g2 = detail::worst_gap_side(ctx.nu_w, ctx.mu_w, tr, t);
    const Rat v = std::max(t, std::max(g1, g2));
    if (v < best) best = v;
  }
  return best;
}

namespace detail {

/// Max-flow (Edmonds–Karp) with exact rational capacities on the bipartite
/// coupling network whose middle edges allow moves of metric <= t.
inline Rat coupling_flow(const LpContext& ctx, const Rat& t) {
  const std::size_t nm = ctx.mu_w.size(), nn = ctx.nu_w.size();
  const std::size_t N = nm + nn + 2, src = nm + nn, snk = nm + nn + 1;
  std::vector<std::vector<Rat>> cap(N, std::vector<Rat>(N, Rat(0)));
  for (std::size_t i = 0; i < nm; ++i) cap[src][i] = ctx.mu_w[i];
  for (std::size_t j = 0; j < nn; ++j) cap[nm + j][snk] = ctx.nu_w[j];
  for (std::size_t i = 0; i < nm; ++i)
    for (std::size_t j = 0; j < nn; ++j)
      if (ctx.cross[i][j] <= t) cap[i][nm + j] = 2;  // effectively unbounded
  Rat flow = 0;
  while (true) {
    std::vector<int> prev(N, -1);
    prev[src] = static_cast<int>(src);
    std::vector<std::size_t> queue{src};
    for (std::size_t q = 0; q < queue.size() && prev[snk] < 0; ++q)
      for (std::size_t v = 0; v < N; ++v)
        if (prev[v] < 0 && cap[queue[q]][v] > 0) {
          prev[v] = static_cast<int>(queue[q]);
          queue.push_back(v);
        }
    if (prev[snk] < 0) break;
    Rat push = 4;
    for (std::size_t v = snk; v != src; v = static_cast<std::size_t>(prev[v]))
      push = std::min(push, cap[static_cast<std::size_t>(prev[v])][v]);
    for (std::size_t v = snk; v != src; v = static_cast<std::size_t>(prev[v])) {
      cap[static_cast<std::size_t>(prev[v])][v] -= push;
      cap[v][static_cast<std::size_t>(prev[v])] += push;
    }
    flow += push;
  }
  return flow;
}

}  // namespace detail

/// Fast Lévy–Prokhorov distance via the Strassen coupling form: feasibility
/// of moving >= 1-eps mass along pairs of metric <= eps is monotone, and the
/// optimum is min over candidate thresholds t of max(t, 1 - maxflow(t)).
inline Rat lp_distance(const Distribution& mu, const Distribution& nu) {
  const auto ctx = detail::lp_context(mu, nu);
  Rat best = 2;
  for (const auto& t : ctx.candidates) {
    const Rat v = std::max(t, Rat(1) - detail::coupling_flow(ctx, t));
    if (v < best) best = v;
  }
  return best;
}

/// Type vector psi over a fixed A_{k,delta} enumeration: counts[c] is the
/// number of vertices whose depth-k view has class c.
struct TypeVector {
  std::vector<long long> counts;
  long long n = 0;

  long long total() const {
    long long s = 0;
    for (auto c : counts) s += c;
    return s;
  }
  bool operator==(const TypeVector&) const = default;
};

inline TypeVector type_vector(const MarkedGraph& g, const ClassTable& table) {
  require(g.max_degree() <= table.delta, errc::degree_bound_violated,
          "graph exceeds the class degree cap");
  TypeVector psi;
  psi.n = g.n();
  psi.counts.assign(table.codes.size(), 0);
  for (int v = 1; v <= g.n(); ++v) {
    const int idx = table.find(canonical_code(truncate(g, v, table.k)));
    if (idx < 0) throw std::logic_error("class enumeration missed a realized neighborhood");
    ++psi.counts[static_cast<std::size_t>(idx)];
  }
  return psi;
}

/// Both sides of the mass-transport identity for f supported on neighbors of
/// the root, evaluated exactly under U(G). Equal for every finite graph.
inline std::pair<Rat, Rat> involution_check(
    const MarkedGraph& g, const std::function<Rat(const RootedClassCode&)>& f, int radius) {
  Rat lhs = 0, rhs = 0;
  for (int o = 1; o <= g.n(); ++o)
    for (int v : g.neighbors(o)) {
      lhs += f(pair_code(g, o, v, radius));
      rhs += f(pair_code(g, v, o, radius));
    }
  return {lhs / g.n(), rhs / g.n()};
}

/// (all root marks under U(G) lie in theta0) implies (all vertex marks do) —
/// trivially equivalent on finite graphs; exposed as a sanity check.
inline bool root_mark_support_check(const MarkedGraph& g, const std::vector<int>& theta0) {
  auto contains = [&](int m) { return std::find(theta0.begin(), theta0.end(), m) != theta0.end(); };
  bool premise = true, conclusion = true;
  for (int v = 1; v <= g.n(); ++v) {
    if (!contains(g.vertex_mark(v))) {
      premise = false;      // root marks range over all vertices
      conclusion = false;
    }
  }
  return !premise || conclusion;
}

}  // namespace mgz
