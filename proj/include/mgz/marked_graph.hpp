// Copyright 2026 the mgz developers.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "mgz/errors.hpp"

namespace mgz {

/// Ordered finite mark alphabets. The index order is the total order used by
/// every canonical serialization; names are presentation only.
struct MarkSets {
  std::vector<std::string> vertex_marks;
  std::vector<std::string> edge_marks;

  static MarkSets indexed(int num_vertex, int num_edge) {
    MarkSets m;
    for (int i = 0; i < num_vertex; ++i) m.vertex_marks.push_back(std::to_string(i));
    for (int i = 0; i < num_edge; ++i) m.edge_marks.push_back(std::to_string(i));
    m.validate();
    return m;
  }

  int num_vertex_marks() const { return static_cast<int>(vertex_marks.size()); }
  int num_edge_marks() const { return static_cast<int>(edge_marks.size()); }

  void validate() const {
    require(!vertex_marks.empty() && !edge_marks.empty(), errc::parameter_out_of_range,
            "mark alphabets must be non-empty");
    auto dupfree = [](const std::vector<std::string>& v) {
      auto s = v;
      std::sort(s.begin(), s.end());
      return std::adjacent_find(s.begin(), s.end()) == s.end();
    };
    require(dupfree(vertex_marks) && dupfree(edge_marks), errc::parameter_out_of_range,
            "mark alphabets must be duplicate-free");
  }
};

/// Index of the unordered pair {x,x'}, x <= x', in the row-major upper
/// triangle over an alphabet of size nxi.
inline int mark_pair_index(int x, int xp, int nxi) {
  if (x > xp) std::swap(x, xp);
  return x * nxi - x * (x - 1) / 2 + (xp - x);
}

inline int num_mark_pairs(int nxi) { return nxi * (nxi + 1) / 2; }

struct EdgeMarkCounts {
  int nxi = 1;
  std::vector<long long> by_pair;  // indexed by mark_pair_index

  explicit EdgeMarkCounts(int nxi_ = 1) : nxi(nxi_), by_pair(num_mark_pairs(nxi_), 0) {}
  long long at(int x, int xp) const { return by_pair[mark_pair_index(x, xp, nxi)]; }
  long long& at(int x, int xp) { return by_pair[mark_pair_index(x, xp, nxi)]; }
  long long norm1() const {
    long long s = 0;
    for (auto c : by_pair) s += c;
    return s;
  }
  bool operator==(const EdgeMarkCounts&) const = default;
};

struct VertexMarkCounts {
  std::vector<long long> by_mark;

  explicit VertexMarkCounts(int ntheta = 1) : by_mark(ntheta, 0) {}
  long long at(int theta) const { return by_mark[theta]; }
  long long& at(int theta) { return by_mark[theta]; }
  long long total() const {
    long long s = 0;
    for (auto c : by_mark) s += c;
    return s;
  }
  bool operator==(const VertexMarkCounts&) const = default;
};

struct EdgeSpec {
  int i, j;
  int mark_to_j, mark_to_i;
};

/// Finite simple marked graph on vertices 1..n. Vertex marks and the two
/// directed marks per edge are stored as alphabet indices; the directed pair
/// is keyed by (min endpoint, max endpoint) as (mark toward max, mark toward
/// min). Immutable after construction.
class MarkedGraph {
 public:
  static MarkedGraph build(const MarkSets& marks, int n, std::vector<int> tau,
                           const std::vector<EdgeSpec>& edges) {
    marks.validate();
    require(n >= 1, errc::parameter_out_of_range, "vertex count must be >= 1");
    require(static_cast<int>(tau.size()) == n, errc::parameter_out_of_range,
            "vertex mark sequence length != n");
    for (int t : tau)
      require(t >= 0 && t < marks.num_vertex_marks(), errc::unknown_mark, "vertex mark index");
    MarkedGraph g;
    g.marks_ = marks;
    g.n_ = n;
    g.tau_ = std::move(tau);
    for (const auto& e : edges) {
      require(e.i >= 1 && e.i <= n && e.j >= 1 && e.j <= n, errc::vertex_out_of_range,
              "edge endpoint out of range");
      require(e.i != e.j, errc::self_loop, "self loop");
      require(e.mark_to_i >= 0 && e.mark_to_i < marks.num_edge_marks() && e.mark_to_j >= 0 &&
                  e.mark_to_j < marks.num_edge_marks(),
              errc::unknown_mark, "edge mark index");
      const int a = std::min(e.i, e.j), b = std::max(e.i, e.j);
      const int to_b = (b == e.j) ? e.mark_to_j : e.mark_to_i;
      const int to_a = (b == e.j) ? e.mark_to_i : e.mark_to_j;
      auto [it, fresh] = g.edges_.emplace(std::make_pair(a, b), std::make_pair(to_b, to_a));
      require(fresh, errc::duplicate_edge, "duplicate edge");
      (void)it;
    }
    g.rebuild_adjacency();
    return g;
  }

  int n() const { return n_; }
  const MarkSets& marks() const { return marks_; }
  int num_vertex_marks() const { return marks_.num_vertex_marks(); }
  int num_edge_marks() const { return marks_.num_edge_marks(); }

  int vertex_mark(int v) const {
    check_vertex(v);
    return tau_[v - 1];
  }
  const std::vector<int>& vertex_marks_seq() const { return tau_; }

  bool has_edge(int i, int j) const {
    return edges_.count(std::make_pair(std::min(i, j), std::max(i, j))) != 0;
  }

  /// xi(i, j): mark of edge {i,j} toward j.
  int xi(int i, int j) const {
    const auto it = edges_.find(std::make_pair(std::min(i, j), std::max(i, j)));
    require(it != edges_.end(), errc::parameter_out_of_range, "xi of a non-edge");
    return j > i ? it->second.first : it->second.second;
  }

  const std::vector<int>& neighbors(int v) const {
    check_vertex(v);
    return adj_[v - 1];
  }

  int degree(int v) const { return static_cast<int>(neighbors(v).size()); }

  /// Number of neighbors w with xi(w,v) = x and xi(v,w) = xp.
  int directed_degree(int v, int x, int xp) const {
    int c = 0;
    for (int w : neighbors(v))
      if (xi(w, v) == x && xi(v, w) == xp) ++c;
    return c;
  }

  long long num_edges() const { return static_cast<long long>(edges_.size()); }

  const std::map<std::pair<int, int>, std::pair<int, int>>& edge_map() const { return edges_; }

  std::pair<EdgeMarkCounts, VertexMarkCounts> counts() const {
    EdgeMarkCounts m(num_edge_marks());
    VertexMarkCounts u(num_vertex_marks());
    for (const auto& [key, mk] : edges_) ++m.at(mk.first, mk.second);
    for (int t : tau_) ++u.at(t);
    return {m, u};
  }

  /// pi maps vertex i to pi[i-1]; vertex pi(i) inherits the mark of i and
  /// each edge (i,j) moves to (pi(i), pi(j)) with its directed marks.
  MarkedGraph apply_permutation(const std::vector<int>& pi) const {
    require(static_cast<int>(pi.size()) == n_, errc::not_a_permutation, "permutation size != n");
    std::vector<char> seen(static_cast<std::size_t>(n_), 0);
    for (int img : pi) {
      require(img >= 1 && img <= n_, errc::not_a_permutation, "image out of range");
      require(!seen[img - 1], errc::not_a_permutation, "repeated image");
      seen[img - 1] = 1;
    }
    MarkedGraph g;
    g.marks_ = marks_;
    g.n_ = n_;
    g.tau_.resize(tau_.size());
    for (int i = 1; i <= n_; ++i) g.tau_[pi[i - 1] - 1] = tau_[i - 1];
    for (const auto& [key, mk] : edges_) {
      const int pi_a = pi[key.first - 1], pi_b = pi[key.second - 1];
      const int a = std::min(pi_a, pi_b), b = std::max(pi_a, pi_b);
      // mk.first is toward key.second, i.e. toward pi_b.
      const int to_b = (b == pi_b) ? mk.first : mk.second;
      const int to_a = (b == pi_b) ? mk.second : mk.first;
      g.edges_[{a, b}] = {to_b, to_a};
    }
    g.rebuild_adjacency();
    return g;
  }

  /// G^Delta: keeps exactly the edges whose two endpoints both have degree
  /// <= delta in this graph (degree ignores marks).
  MarkedGraph trim(int delta) const {
    require(delta >= 0, errc::parameter_out_of_range, "negative degree cap");
    MarkedGraph g;
    g.marks_ = marks_;
    g.n_ = n_;
    g.tau_ = tau_;
    for (const auto& [key, mk] : edges_)
      if (degree(key.first) <= delta && degree(key.second) <= delta) g.edges_[key] = mk;
    g.rebuild_adjacency();
    return g;
  }

  /// R = { i : deg(i) > delta, or some neighbor j of i has deg(j) > delta }.
  std::vector<int> residual_set(int delta) const {
    std::vector<int> r;
    for (int v = 1; v <= n_; ++v) {
      bool in = degree(v) > delta;
      if (!in)
        for (int w : neighbors(v))
          if (degree(w) > delta) {
            in = true;
            break;
          }
      if (in) r.push_back(v);
    }
    return r;
  }

  /// UM(G): same vertices and edges over singleton alphabets.
  MarkedGraph forget_marks() const {
    MarkedGraph g;
    g.marks_ = MarkSets::indexed(1, 1);
    g.n_ = n_;
    g.tau_.assign(static_cast<std::size_t>(n_), 0);
    for (const auto& [key, mk] : edges_) g.edges_[key] = {0, 0};
    g.rebuild_adjacency();
    return g;
  }

  int max_degree() const {
    int d = 0;
    for (int v = 1; v <= n_; ++v) d = std::max(d, degree(v));
    return d;
  }

  /// Lexicographic serialization key: the vertex-mark sequence followed by
  /// the row-major upper-triangular slot symbols, 0 for no edge and
  /// 1 + (mark toward max)*|Xi| + (mark toward min) otherwise. This order is
  /// the enumeration order of type classes (W_n).
  std::vector<int> lex_key() const {
    std::vector<int> key = tau_;
    const int nxi = num_edge_marks();
    for (int i = 1; i <= n_; ++i)
      for (int j = i + 1; j <= n_; ++j) {
        const auto it = edges_.find({i, j});
        key.push_back(it == edges_.end() ? 0 : 1 + it->second.first * nxi + it->second.second);
      }
    return key;
  }

  bool operator==(const MarkedGraph& o) const {
    return n_ == o.n_ && num_vertex_marks() == o.num_vertex_marks() &&
           num_edge_marks() == o.num_edge_marks() && tau_ == o.tau_ && edges_ == o.edges_;
  }
  bool operator!=(const MarkedGraph& o) const { return !(*this == o); }

  // Text format: line 1 `n |Theta| |Xi|`, line 2 the n vertex-mark indices,
  // then one line per edge `i j xi_to_j xi_to_i`. `#` starts a comment.
  void to_text(std::ostream& os) const {
    os << n_ << ' ' << num_vertex_marks() << ' ' << num_edge_marks() << '\n';
    for (int i = 0; i < n_; ++i) os << tau_[i] << (i + 1 == n_ ? '\n' : ' ');
    if (n_ == 0) os << '\n';
    for (const auto& [key, mk] : edges_)
      os << key.first << ' ' << key.second << ' ' << mk.first << ' ' << mk.second << '\n';
  }

  std::string to_text() const {
    std::ostringstream os;
    to_text(os);
    return os.str();
  }

  static MarkedGraph parse_text(std::istream& is) {
    std::vector<long long> tok;
    std::string line;
    while (std::getline(is, line)) {
      if (auto h = line.find('#'); h != std::string::npos) line.resize(h);
      std::istringstream ls(line);
      long long v;
      while (ls >> v) tok.push_back(v);
      if (!ls.eof()) raise(errc::parse_error, "non-numeric token in graph text");
    }
    std::size_t p = 0;
    auto next = [&]() {
      require(p < tok.size(), errc::parse_error, "truncated graph text");
      return tok[p++];
    };
    const long long n = next(), ntheta = next(), nxi = next();
    require(n >= 1 && n <= 1'000'000 && ntheta >= 1 && nxi >= 1 && ntheta <= 4096 && nxi <= 4096,
            errc::parse_error, "bad graph header line");
    std::vector<int> tau;
    for (long long i = 0; i < n; ++i) tau.push_back(static_cast<int>(next()));
    std::vector<EdgeSpec> edges;
    while (p < tok.size()) {
      require(tok.size() - p >= 4, errc::parse_error, "truncated edge line");
      EdgeSpec e;
      e.i = static_cast<int>(next());
      e.j = static_cast<int>(next());
      e.mark_to_j = static_cast<int>(next());
      e.mark_to_i = static_cast<int>(next());
      edges.push_back(e);
    }
    return build(MarkSets::indexed(static_cast<int>(ntheta), static_cast<int>(nxi)),
                 static_cast<int>(n), std::move(tau), edges);
  }

  static MarkedGraph parse_text(const std::string& s) {
    std::istringstream is(s);
    return parse_text(is);
  }

 private:
  MarkedGraph() = default;

  void check_vertex(int v) const {
    require(v >= 1 && v <= n_, errc::vertex_out_of_range, "vertex id out of range");
  }

  void rebuild_adjacency() {
    adj_.assign(static_cast<std::size_t>(n_), {});
    for (const auto& [key, mk] : edges_) {
      adj_[key.first - 1].push_back(key.second);
      adj_[key.second - 1].push_back(key.first);
    }
    for (auto& a : adj_) std::sort(a.begin(), a.end());
  }

  MarkSets marks_;
  int n_ = 0;
  std::vector<int> tau_;
  std::map<std::pair<int, int>, std::pair<int, int>> edges_;  // (a,b)->(to_b, to_a), a<b
  std::vector<std::vector<int>> adj_;
};

/// BFS distances from `o`; unreachable vertices get -1.
inline std::vector<int> bfs_distances(const MarkedGraph& g, int o) {
  std::vector<int> dist(static_cast<std::size_t>(g.n()), -1);
  dist[o - 1] = 0;
  std::vector<int> frontier{o};
  while (!frontier.empty()) {
    std::vector<int> next;
    for (int v : frontier)
      for (int w : g.neighbors(v))
        if (dist[w - 1] < 0) {
          dist[w - 1] = dist[v - 1] + 1;
          next.push_back(w);
        }
    frontier = std::move(next);
  }
  return dist;
}

/// Induced marked subgraph on the given vertices (sorted ascending),
/// relabeled 1..|S| in that order.
inline MarkedGraph induced_subgraph(const MarkedGraph& g, const std::vector<int>& vertices) {
  std::vector<int> sorted = vertices;
  std::sort(sorted.begin(), sorted.end());
  std::map<int, int> relabel;
  std::vector<int> tau;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    relabel[sorted[i]] = static_cast<int>(i) + 1;
    tau.push_back(g.vertex_mark(sorted[i]));
  }
  std::vector<EdgeSpec> edges;
  for (const auto& [key, mk] : g.edge_map()) {
    const auto a = relabel.find(key.first), b = relabel.find(key.second);
    if (a != relabel.end() && b != relabel.end())
      edges.push_back({a->second, b->second, mk.first, mk.second});
  }
  return MarkedGraph::build(g.marks(), static_cast<int>(sorted.size()), std::move(tau), edges);
}

}  // namespace mgz
