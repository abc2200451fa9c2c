// Copyright 2026 the mgz developers.
// SPDX-License-Identifier: Apache-2.0

#include <catch2/catch_amalgamated.hpp>
#include <cmath>
#include <map>

#include "mgz/entropy.hpp"
#include "test_util.hpp"

using namespace mgz;
using mgz_test::load_fixture;
using mgz_test::random_graph;

namespace {

EdgeMarkCounts mvec(int nxi, std::initializer_list<std::pair<std::pair<int, int>, long long>> vs) {
  EdgeMarkCounts m(nxi);
  for (const auto& [xp, c] : vs) m.at(xp.first, xp.second) = c;
  return m;
}

VertexMarkCounts uvec(std::initializer_list<long long> vs) {
  VertexMarkCounts u(static_cast<int>(vs.size()));
  int i = 0;
  for (long long v : vs) u.at(i++) = v;
  return u;
}

}  // namespace

TEST_CASE("entropy primitives") {
  CHECK(s_of(0.0) == 0.0);
  CHECK(s_of(1.0) == Catch::Approx(0.5));
  // 1 is the maximum
  for (double d : {0.25, 0.5, 0.9, 1.1, 2.0, 5.0}) CHECK(s_of(d) < 0.5);
  CHECK_THROWS_MATCHES(s_of(-1.0), Error, Catch::Matchers::Predicate<Error>([](const Error& e) {
                         return e.code() == errc::negative_input;
                       }));
  CHECK(entropy_h({Rat(1, 2), Rat(1, 2)}) == Catch::Approx(std::log(2.0)));
  CHECK(entropy_h({Rat(1), Rat(0)}) == 0.0);
}

TEST_CASE("exact family counts") {
  SECTION("unmarked pairs of edges on three vertices") {
    CHECK(exact_count(3, mvec(1, {{{0, 0}, 2}}), uvec({3})) == 3);
  }
  SECTION("two marks, four vertices, three edges") {
    CHECK(exact_count(4, mvec(1, {{{0, 0}, 3}}), uvec({2, 2})) == 120);
  }
  SECTION("orientation factor for mixed mark pairs") {
    CHECK(exact_count(2, mvec(2, {{{0, 1}, 1}}), uvec({2})) == 2);
  }
  SECTION("infeasible counts give zero") {
    CHECK(exact_count(3, mvec(1, {{{0, 0}, 4}}), uvec({3})) == 0);  // too many edges
    CHECK(exact_count(3, mvec(1, {}), uvec({2})) == 0);             // wrong vertex total
  }
  SECTION("matches brute-force enumeration over all count cells") {
    for (int n = 2; n <= 3; ++n) {
      std::map<std::pair<std::vector<long long>, std::vector<long long>>, long long> brute;
      mgz_test::for_all_graphs(n, 2, 2, [&brute](const MarkedGraph& g) {
        const auto [m, u] = g.counts();
        ++brute[{m.by_pair, u.by_mark}];
      });
      long long total = 0;
      for (const auto& [key, cnt] : brute) {
        EdgeMarkCounts m(2);
        m.by_pair = key.first;
        VertexMarkCounts u(2);
        u.by_mark = key.second;
        CHECK(exact_count(n, m, u) == cnt);
        total += cnt;
      }
      // every graph fell in exactly one cell
      long long all = 1;
      for (int s = 0; s < n * (n - 1) / 2; ++s) all *= 5;
      for (int v = 0; v < n; ++v) all *= 2;
      CHECK(total == all);
    }
  }
}

TEST_CASE("counting formula principal terms") {
  SECTION("frozen residues for d = 1 on the unmarked family") {
    auto residue = [](long long n) {
      return stirling_residue(n, mvec(1, {{{0, 0}, n / 2}}), uvec({n}));
    };
    CHECK(residue(8) == Catch::Approx(-2.390806).margin(1e-5));
    CHECK(residue(16) == Catch::Approx(-2.723730).margin(1e-5));
    CHECK(residue(32) == Catch::Approx(-3.062915).margin(1e-5));
    CHECK(residue(64) == Catch::Approx(-3.405681).margin(1e-5));
  }
  SECTION("edgeless families reduce to the multinomial term") {
    const long long n = 12;
    const auto u = uvec({7, 5});
    const Int c = exact_count(n, mvec(1, {}), u);
    CHECK(c == factorial(n) / (factorial(7) * factorial(5)));
    const double residue = stirling_residue(n, mvec(1, {}), u);
    CHECK(std::abs(residue) < std::log(static_cast<double>(n)) * 3);  // O(log n)
  }
  SECTION("binomial log bound") {
    for (long long n = 2; n <= 25; ++n)
      for (long long m = 0; m <= n * (n - 1) / 2; ++m) {
        const double lhs = ln(binomial(n * (n - 1) / 2, m));
        const double rhs =
            static_cast<double>(m) * std::log(static_cast<double>(n)) +
            static_cast<double>(n) * s_of(2.0 * static_cast<double>(m) / static_cast<double>(n));
        CHECK(lhs <= rhs + 1e-9);
      }
  }
}

TEST_CASE("epsilon balls") {
  const auto g = load_fixture("fig6a.txt");
  const auto [m, u] = g.counts();
  const auto marks = g.marks();
  SECTION("eps beyond the metric diameter captures the whole family") {
    const Int whole = exact_count(4, m, u);
    CHECK(ball_count(marks, 4, m, u, empirical(g, -1), Rat(2)) == whole);
  }
  SECTION("monotone in eps") {
    const auto mu = empirical(g, -1);
    Int prev = 0;
    for (const Rat eps : {Rat(1, 1000), Rat(1, 3), Rat(1, 2), Rat(3, 4), Rat(2)}) {
      const Int b = ball_count(marks, 4, m, u, mu, eps);
      CHECK(b >= prev);
      prev = b;
    }
  }
  SECTION("tiny eps counts exactly the graphs with the same empirical distribution") {
    const auto mu = empirical(g, -1);
    Int same = 0;
    for_each_in_family(marks, 4, m, u, [&](const MarkedGraph& w) {
      if (empirical(w, 3) == empirical(g, 3)) ++same;
      return true;
    });
    CHECK(ball_count(marks, 4, m, u, mu, Rat(1, 1000)) == same);
    CHECK(same >= 6);  // contains the relabelings forming the type class
  }
  SECTION("ball around the 4-cycle type at eps just above 1/2") {
    const auto e = bc_estimate(marks, 4, m, u, empirical(g, -1), Rat(1, 2) + Rat(1, 1000));
    CHECK_FALSE(e.empty_ball);
    CHECK(e.ball_size >= 6);  // the type class W_4 is inside
    CHECK(e.cap == Catch::Approx(s_of(2.0) + std::log(2.0)));
    CHECK(e.value <= e.cap + 1.0);  // finite-n value reported, not asserted tight
  }
  SECTION("empty ball reports the sentinel") {
    // a far-away Dirac: single vertex with mark 1
    const auto far = MarkedGraph::build(marks, 1, {1}, {});
    Atom a;
    a.profile = depth_profile(far, 1, -1);
    a.weight = 1;
    const auto mu = Distribution::from_atoms(-1, {a});
    const auto e = bc_estimate(marks, 4, m, u, mu, Rat(1, 100));
    CHECK(e.empty_ball);
    CHECK(e.ball_size == 0);
  }
}

TEST_CASE("kraft audit") {
  SECTION("single blob") {
    const auto blob = compress(load_fixture("k3.txt"), [] {
      CodecConfig c;
      c.k = 1;
      c.delta = 2;
      return c;
    }());
    const auto sum = kraft_audit({blob});
    CHECK(sum == Rat(Int(1), Int(1) << blob.header().payload_bits));
  }
  SECTION("exhaustive three-vertex family sums below one") {
    std::vector<CompressedBlob> blobs;
    for (int mask = 0; mask < 8; ++mask) {
      std::vector<EdgeSpec> edges;
      if (mask & 1) edges.push_back({1, 2, 0, 0});
      if (mask & 2) edges.push_back({1, 3, 0, 0});
      if (mask & 4) edges.push_back({2, 3, 0, 0});
      CodecConfig c;
      c.k = 1;
      c.delta = 2;
      blobs.push_back(
          compress(MarkedGraph::build(MarkSets::indexed(1, 1), 3, {0, 0, 0}, edges), c));
    }
    CHECK(kraft_audit(blobs) <= 1);
  }
}

TEST_CASE("rate reports") {
  const auto g = load_fixture("fig1.txt");
  CodecConfig c;
  c.k = 1;
  c.delta = 2;
  const auto blob = compress(g, c);
  const auto r = rate_report(g, blob);
  CHECK(r.n == 8);
  CHECK(r.m_norm == 9);
  CHECK(r.nats_used ==
        Catch::Approx(static_cast<double>(blob.header().payload_bits) * std::log(2.0)));
  CHECK(r.rate == Catch::Approx((r.nats_used - 9 * std::log(8.0)) / 8));
  const auto [m, u] = g.counts();
  const auto p = EntropyParams::from_counts(8, m, u);
  CHECK(r.upper_bound == Catch::Approx(big_s(p) + entropy_h(p.q)));
}
