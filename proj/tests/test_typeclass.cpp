// Copyright 2026 the mgz developers.
// SPDX-License-Identifier: Apache-2.0

#include <catch2/catch_amalgamated.hpp>
#include <set>

#include "mgz/typeclass.hpp"
#include "test_util.hpp"

using namespace mgz;
using mgz_test::load_fixture;
using mgz_test::random_graph;

namespace {

FirstStepParams params_for(int n, int k, int delta, int ntheta = 2, int nxi = 1) {
  FirstStepParams p;
  p.marks = MarkSets::indexed(ntheta, nxi);
  p.n = n;
  p.k = k;
  p.delta = delta;
  return p;
}

/// Independent oracle: all graphs on n labeled vertices (small alphabets)
/// with max degree <= delta and the given type vector.
std::vector<MarkedGraph> brute_force_W(const TypeVector& psi, const FirstStepParams& p,
                                       const ClassTable& table) {
  std::vector<MarkedGraph> out;
  const int ntheta = p.marks.num_vertex_marks(), nxi = p.marks.num_edge_marks();
  std::vector<std::pair<int, int>> slots;
  for (int i = 1; i <= p.n; ++i)
    for (int j = i + 1; j <= p.n; ++j) slots.emplace_back(i, j);
  std::vector<int> tau(static_cast<std::size_t>(p.n), 0);
  std::vector<int> sym(slots.size(), 0);
  auto next_vec = [](std::vector<int>& v, int radix) {
    int t = static_cast<int>(v.size()) - 1;
    while (t >= 0 && v[t] == radix - 1) v[t--] = 0;
    if (t < 0) return false;
    ++v[t];
    return true;
  };
  do {
    do {
      std::vector<EdgeSpec> edges;
      for (std::size_t s = 0; s < slots.size(); ++s)
        if (sym[s] != 0)
          edges.push_back(
              {slots[s].first, slots[s].second, (sym[s] - 1) / nxi, (sym[s] - 1) % nxi});
      auto g = MarkedGraph::build(p.marks, p.n, tau, edges);
      if (g.max_degree() > p.delta) continue;
      if (type_vector(g, table).counts == psi.counts) out.push_back(std::move(g));
    } while (next_vec(sym, 1 + nxi * nxi));
  } while (next_vec(tau, ntheta));
  return out;
}

}  // namespace

TEST_CASE("W enumeration of the 4-cycle type") {
  const auto g = load_fixture("fig6a.txt");
  const auto p = params_for(4, 1, 2);
  const auto table = ClassTable::build(p.marks, p.k, p.delta);
  const auto psi = type_vector(g, table);
  const auto members = enumerate_W_all(psi, p, table);
  REQUIRE(members.size() == 6);

  bool found_input = false;
  for (const auto& w : members) {
    CHECK(w.num_edges() == 4);
    CHECK(w.max_degree() == 2);
    // alternating marks around a 4-cycle: every vertex has two
    // opposite-marked neighbors
    for (int v = 1; v <= 4; ++v)
      for (int u : w.neighbors(v)) CHECK(w.vertex_mark(u) != w.vertex_mark(v));
    if (w == g) found_input = true;
  }
  CHECK(found_input);

  // the stream agrees with the brute-force filter of all graphs
  const auto brute = brute_force_W(psi, p, table);
  REQUIRE(brute.size() == members.size());
  for (std::size_t i = 0; i < brute.size(); ++i) CHECK(brute[i] == members[i]);
}

TEST_CASE("W enumeration matches brute force on random types") {
  for (std::uint64_t seed = 1; seed <= 12; ++seed) {
    const int n = 4 + static_cast<int>(seed % 2);
    const auto p = params_for(n, 1, 2);
    const auto table = ClassTable::build(p.marks, p.k, p.delta);
    const auto g = random_graph(seed, n, 2, 1, 0.35).trim(2);
    const auto psi = type_vector(g, table);
    const auto fast = enumerate_W_all(psi, p, table);
    const auto brute = brute_force_W(psi, p, table);
    REQUIRE(fast.size() == brute.size());
    for (std::size_t i = 0; i < fast.size(); ++i) CHECK(fast[i] == brute[i]);
  }
}

TEST_CASE("degenerate and inconsistent types") {
  SECTION("all mass on an isolated root gives exactly the edgeless graph") {
    const auto p = params_for(4, 1, 2);
    const auto table = ClassTable::build(p.marks, p.k, p.delta);
    const auto edgeless = MarkedGraph::build(p.marks, 4, {1, 1, 1, 1}, {});
    const auto psi = type_vector(edgeless, table);
    const auto members = enumerate_W_all(psi, p, table);
    REQUIRE(members.size() == 1);
    CHECK(members[0] == edgeless);
  }
  SECTION("parity-impossible type is empty") {
    const auto p = params_for(3, 1, 2);
    const auto table = ClassTable::build(p.marks, p.k, p.delta);
    const auto pair = MarkedGraph::build(p.marks, 2, {0, 0}, {{1, 2, 0, 0}});
    TypeVector psi;
    psi.n = 3;
    psi.counts.assign(table.codes.size(), 0);
    const int edge_class = table.find(canonical_code(truncate(pair, 1, 1)));
    const int iso_class = table.find(canonical_code(truncate(MarkedGraph::build(p.marks, 1, {0}, {}), 1, 1)));
    REQUIRE(edge_class >= 0);
    REQUIRE(iso_class >= 0);
    psi.counts[static_cast<std::size_t>(edge_class)] = 1;  // odd endpoint count
    psi.counts[static_cast<std::size_t>(iso_class)] = 2;
    CHECK(enumerate_W_all(psi, p, table).empty());
    // and the brute force agrees it is empty
    CHECK(brute_force_W(psi, p, table).empty());
  }
}

TEST_CASE("rank and unrank") {
  SECTION("the 4-cycle ranks within its 6-element class") {
    const auto g = load_fixture("fig6a.txt");
    const auto p = params_for(4, 1, 2);
    const auto table = ClassTable::build(p.marks, p.k, p.delta);
    const auto ranked = rank_in_W(g, p, table);
    CHECK(ranked.w_size == 6);
    CHECK(ranked.rank >= 0);
    CHECK(ranked.rank < 6);
    CHECK(unrank_in_W(ranked.psi, ranked.rank, p, table) == g);
  }
  SECTION("single-graph class") {
    const auto p = params_for(3, 1, 2);
    const auto table = ClassTable::build(p.marks, p.k, p.delta);
    const auto edgeless = MarkedGraph::build(p.marks, 3, {0, 0, 0}, {});
    const auto ranked = rank_in_W(edgeless, p, table);
    CHECK(ranked.rank == 0);
    CHECK(ranked.w_size == 1);
  }
  SECTION("exhaustive round trip on four vertices") {
    const auto p = params_for(4, 1, 3);
    const auto table = ClassTable::build(p.marks, p.k, p.delta);
    std::vector<int> tau(4, 0);
    auto next_vec = [](std::vector<int>& v, int radix) {
      int t = static_cast<int>(v.size()) - 1;
      while (t >= 0 && v[t] == radix - 1) v[t--] = 0;
      if (t < 0) return false;
      ++v[t];
      return true;
    };
    std::vector<int> sym(6, 0);
    std::vector<std::pair<int, int>> slots{{1, 2}, {1, 3}, {1, 4}, {2, 3}, {2, 4}, {3, 4}};
    int total = 0;
    do {
      do {
        std::vector<EdgeSpec> edges;
        for (std::size_t s = 0; s < slots.size(); ++s)
          if (sym[s] != 0) edges.push_back({slots[s].first, slots[s].second, 0, 0});
        const auto g = MarkedGraph::build(p.marks, 4, tau, edges);
        const auto ranked = rank_in_W(g, p, table);
        CHECK(unrank_in_W(ranked.psi, ranked.rank, p, table) == g);
        ++total;
      } while (next_vec(sym, 2));
    } while (next_vec(tau, 2));
    CHECK(total == 16 * 64);
  }
  SECTION("out-of-range rank is rejected") {
    const auto p = params_for(3, 1, 2);
    const auto table = ClassTable::build(p.marks, p.k, p.delta);
    const auto edgeless = MarkedGraph::build(p.marks, 3, {0, 0, 0}, {});
    const auto psi = type_vector(edgeless, table);
    CHECK_THROWS_MATCHES(unrank_in_W(psi, Int(1), p, table), Error,
                         Catch::Matchers::Predicate<Error>([](const Error& e) {
                           return e.code() == errc::rank_out_of_range;
                         }));
  }
  SECTION("empty class is reported") {
    const auto p = params_for(2, 1, 1);
    const auto table = ClassTable::build(p.marks, p.k, p.delta);
    TypeVector psi;
    psi.n = 2;
    psi.counts.assign(table.codes.size(), 0);
    const auto pair = MarkedGraph::build(p.marks, 2, {0, 0}, {{1, 2, 0, 0}});
    psi.counts[static_cast<std::size_t>(
        table.find(canonical_code(truncate(pair, 1, 1))))] = 1;
    const auto iso = MarkedGraph::build(p.marks, 1, {0}, {});
    psi.counts[static_cast<std::size_t>(
        table.find(canonical_code(truncate(iso, 1, 1))))] = 1;
    CHECK_THROWS_MATCHES(unrank_in_W(psi, Int(0), p, table), Error,
                         Catch::Matchers::Predicate<Error>([](const Error& e) {
                           return e.code() == errc::empty_type_class;
                         }));
  }
}

TEST_CASE("first-step encoding") {
  SECTION("the 4-cycle takes 18*3 + 3 = 57 bits") {
    const auto g = load_fixture("fig6a.txt");
    const auto p = params_for(4, 1, 2);
    const auto table = ClassTable::build(p.marks, p.k, p.delta);
    const auto bits = encode_first_step(g, p, table);
    CHECK(bits.nbits == 57);
    CHECK(decode_first_step(bits, p, table) == g);
  }
  SECTION("single vertex with k = 0") {
    const auto p = params_for(1, 0, 0);
    const auto table = ClassTable::build(p.marks, p.k, p.delta);
    REQUIRE(table.size() == 2);
    const auto g = MarkedGraph::build(p.marks, 1, {1}, {});
    const auto bits = encode_first_step(g, p, table);
    CHECK(bits.nbits == 3);  // |Theta| one-bit count fields + one rank bit
    CHECK(decode_first_step(bits, p, table) == g);
  }
  SECTION("round trip on random graphs with trimming-scale caps") {
    for (std::uint64_t seed = 1; seed <= 100; ++seed) {
      const int n = 3 + static_cast<int>(seed % 4);
      const auto p = params_for(n, 1, 2);
      const auto table = ClassTable::build(p.marks, p.k, p.delta);
      const auto g = random_graph(seed, n, 2, 1, 0.4).trim(2);
      const auto bits = encode_first_step(g, p, table);
      CHECK(decode_first_step(bits, p, table) == g);
      // declared length formula, exactly
      const auto ranked = rank_in_W(g, p, table);
      CHECK(bits.nbits == table.codes.size() * bit_length(Int(n)) + bit_length(ranked.w_size));
    }
  }
  SECTION("degree violations are rejected at encode time") {
    const auto p = params_for(4, 1, 2);
    const auto table = ClassTable::build(p.marks, p.k, p.delta);
    const auto star = MarkedGraph::build(p.marks, 4, {0, 0, 0, 0},
                                         {{1, 2, 0, 0}, {1, 3, 0, 0}, {1, 4, 0, 0}});
    CHECK_THROWS_MATCHES(encode_first_step(star, p, table), Error,
                         Catch::Matchers::Predicate<Error>([](const Error& e) {
                           return e.code() == errc::degree_bound_violated;
                         }));
  }
  SECTION("malformed streams are rejected") {
    const auto p = params_for(4, 1, 2);
    const auto table = ClassTable::build(p.marks, p.k, p.delta);
    // counts that do not sum to n
    BitWriter w;
    for (int c = 0; c < table.size(); ++c) w.put(Int(0), 3);
    w.put(Int(0), 1);
    CHECK_THROWS_MATCHES(decode_first_step(w.take(), p, table), Error,
                         Catch::Matchers::Predicate<Error>([](const Error& e) {
                           return e.code() == errc::malformed_stream;
                         }));
    // rank beyond |W|: same counts, rank field forced to 7 > 5
    const auto g = load_fixture("fig6a.txt");
    const auto bits = encode_first_step(g, p, table);
    BitReader r(bits);
    BitWriter bad;
    for (std::size_t i = 0; i + 3 < bits.nbits; ++i) bad.put_bit(r.get_bit());
    bad.put(Int(7), 3);
    CHECK_THROWS_MATCHES(decode_first_step(bad.take(), p, table), Error,
                         Catch::Matchers::Predicate<Error>([](const Error& e) {
                           return e.code() == errc::malformed_stream;
                         }));
  }
}

TEST_CASE("type-class members share counts and sit close in LP distance") {
  for (std::uint64_t seed = 1; seed <= 8; ++seed) {
    const int n = 5;
    const auto p = params_for(n, 1, 2);
    const auto table = ClassTable::build(p.marks, p.k, p.delta);
    const auto g = random_graph(seed, n, 2, 1, 0.35).trim(2);
    const auto psi = type_vector(g, table);
    const auto mu_g = empirical(g, -1);
    enumerate_W(psi, p, table, [&](const MarkedGraph& w) {
      CHECK(type_vector(w, table).counts == psi.counts);
      CHECK(w.counts() == g.counts());
      CHECK(lp_distance_oracle(empirical(w, -1), mu_g) <= Rat(1, 1 + p.k));
      return true;
    });
  }
}
