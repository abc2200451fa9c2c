// Copyright 2026 the mgz developers.
// SPDX-License-Identifier: Apache-2.0

#include <catch2/catch_amalgamated.hpp>
#include <array>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <string>

#include "mgz/marked_graph.hpp"

namespace {

struct CliResult {
  int exit_code;
  std::string out;
};

CliResult run_cli(const std::string& args) {
  const std::string cmd = std::string(MGZ_CLI_PATH) + " " + args + " 2>/dev/null";
  std::array<char, 4096> buf{};
  std::string out;
  FILE* p = popen(cmd.c_str(), "r");
  REQUIRE(p != nullptr);
  while (fgets(buf.data(), buf.size(), p) != nullptr) out += buf.data();
  const int status = pclose(p);
  return {WEXITSTATUS(status), out};
}

std::string fixture(const std::string& name) {
  return std::string(MGZ_FIXTURE_DIR) + "/" + name;
}

std::string tmp_path(const std::string& name) {
  return std::string("/tmp/mgz_cli_test_") + name;
}

}  // namespace

TEST_CASE("cli compress reports the first-step width and round-trips") {
  const auto blob = tmp_path("fig6a.mgz");
  const auto r = run_cli("compress --input " + fixture("fig6a.txt") + " --output " + blob +
                         " --depth 1 --max-degree 2");
  REQUIRE(r.exit_code == 0);
  CHECK(r.out.find("classes=18\n") != std::string::npos);
  CHECK(r.out.find("w_size=6\n") != std::string::npos);
  CHECK(r.out.find("first_step_bits=57\n") != std::string::npos);

  const auto d = run_cli("decompress --input " + blob);
  REQUIRE(d.exit_code == 0);
  std::ifstream f(fixture("fig6a.txt"));
  const auto original = mgz::MarkedGraph::parse_text(f);
  CHECK(mgz::MarkedGraph::parse_text(d.out) == original);
}

TEST_CASE("cli decompress to a file matches byte-for-byte reparse") {
  const auto blob = tmp_path("fig1.mgz");
  const auto text = tmp_path("fig1_back.txt");
  REQUIRE(run_cli("compress --input " + fixture("fig1.txt") + " --output " + blob +
                  " --depth 1 --max-degree 2")
              .exit_code == 0);
  REQUIRE(run_cli("decompress --input " + blob + " --output " + text).exit_code == 0);
  std::ifstream fa(fixture("fig1.txt")), fb(text);
  CHECK(mgz::MarkedGraph::parse_text(fa) == mgz::MarkedGraph::parse_text(fb));
}

TEST_CASE("cli query") {
  const auto blob = tmp_path("k3.mgz");
  REQUIRE(run_cli("compress --input " + fixture("k3.txt") + " --output " + blob +
                  " --depth 1 --max-degree 2")
              .exit_code == 0);
  const auto r = run_cli("query --input " + blob + " --triangles");
  REQUIRE(r.exit_code == 0);
  CHECK(r.out == "count=1 slack=0\n");
}

TEST_CASE("cli inspect is deterministic") {
  const auto blob = tmp_path("insp.mgz");
  REQUIRE(run_cli("compress --input " + fixture("fig6a.txt") + " --output " + blob +
                  " --depth 1 --max-degree 2")
              .exit_code == 0);
  const auto a = run_cli("inspect --input " + blob);
  const auto b = run_cli("inspect --input " + blob);
  REQUIRE(a.exit_code == 0);
  CHECK(a.out == b.out);
  CHECK(a.out.find("r_size=0\n") != std::string::npos);
  CHECK(a.out.find("psi ") != std::string::npos);
}

TEST_CASE("cli generate and experiment") {
  const auto r = run_cli("experiment --family cycle --depth 1 --n-list 5,8,11");
  REQUIRE(r.exit_code == 0);
  CHECK(r.out == "n,empirical,limit\n5,1/1,1/1\n8,1/1,1/1\n11,1/1,1/1\n");

  const auto g = run_cli("generate --family er --n 30 --alpha 2 --seed 9");
  const auto g2 = run_cli("generate --family er --n 30 --alpha 2 --seed 9");
  REQUIRE(g.exit_code == 0);
  CHECK(g.out == g2.out);  // byte-identical for a fixed seed
}

TEST_CASE("cli lp on emitted distributions") {
  const auto da = tmp_path("a.dist"), db = tmp_path("b.dist");
  REQUIRE(run_cli("stats --input " + fixture("fig6a.txt") +
                  " --depth 1 --max-degree 2 --emit-distribution " + da + " --at-depth 1")
              .exit_code == 0);
  REQUIRE(run_cli("stats --input " + fixture("k3.txt") +
                  " --depth 1 --max-degree 2 --emit-distribution " + db + " --at-depth 1")
              .exit_code == 0);
  const auto same = run_cli("lp --a " + da + " --b " + da);
  REQUIRE(same.exit_code == 0);
  CHECK(same.out == "distance=0/1\n");
  const auto fast = run_cli("lp --a " + da + " --b " + db);
  const auto oracle = run_cli("lp --a " + da + " --b " + db + " --oracle");
  REQUIRE(fast.exit_code == 0);
  CHECK(fast.out == oracle.out);
}

TEST_CASE("cli exit codes") {
  CHECK(run_cli("nonsense").exit_code == 1);
  CHECK(run_cli("compress --input /nonexistent.txt --output /tmp/x.mgz").exit_code == 2);
  CHECK(run_cli("decompress --input " + fixture("fig6a.txt")).exit_code == 2);  // not a blob
  CHECK(run_cli("--help").exit_code == 0);
}
