// Copyright 2026 the mgz developers.
// SPDX-License-Identifier: Apache-2.0

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "mgz/mgz.hpp"

namespace {

mgz::MarkedGraph read_graph(const std::string& path) {
  std::ifstream f(path);
  if (!f.good()) mgz::raise(mgz::errc::parse_error, "cannot open " + path);
  return mgz::MarkedGraph::parse_text(f);
}

mgz::CompressedBlob read_blob(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f.good()) mgz::raise(mgz::errc::parse_error, "cannot open " + path);
  mgz::CompressedBlob blob;
  blob.bytes.assign(std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>());
  return blob;
}

void write_file(const std::string& path, const std::string& data, bool binary) {
  std::ofstream f(path, binary ? std::ios::binary : std::ios::out);
  if (!f.good()) mgz::raise(mgz::errc::parse_error, "cannot open " + path + " for writing");
  f.write(data.data(), static_cast<std::streamsize>(data.size()));
}

std::string rat_str(const mgz::Rat& r) {
  std::ostringstream os;
  os << boost::multiprecision::numerator(r) << '/' << boost::multiprecision::denominator(r);
  return os.str();
}

mgz::Family parse_family(const std::string& name, double alpha, std::uint64_t seed) {
  mgz::Family f;
  f.alpha = alpha;
  f.seed = seed;
  if (name == "cycle")
    f.kind = mgz::FamilyKind::cycle;
  else if (name == "lattice2d")
    f.kind = mgz::FamilyKind::lattice2d;
  else if (name == "er")
    f.kind = mgz::FamilyKind::erdos_renyi;
  else if (name == "bipartite3")
    f.kind = mgz::FamilyKind::bipartite3;
  else
    mgz::raise(mgz::errc::parameter_out_of_range, "unknown family " + name);
  return f;
}

struct CodecFlags {
  int depth = 0;
  int max_degree = 0;
  long long budget = 0;

  mgz::CodecConfig config() const {
    mgz::CodecConfig cfg;
    cfg.k = depth;
    cfg.delta = max_degree;
    if (budget > 0) {
      cfg.class_budget = budget;
      cfg.node_budget = budget;
    }
    return cfg;
  }

  void attach(CLI::App* cmd) {
    cmd->add_option("--depth", depth, "Neighborhood depth k (default: floor sqrt(log log n))");
    cmd->add_option("--max-degree", max_degree, "Degree cap delta (default: floor log log n)");
    cmd->add_option("--budget", budget, "Enumeration budget override");
  }
};

int run(int argc, char** argv) {
  CLI::App app{"mgz: lossless compression for finite marked graphs"};
  app.require_subcommand(1);

  auto* c_compress = app.add_subcommand("compress", "Compress a graph text file");
  std::string in_path, out_path;
  CodecFlags flags;
  c_compress->add_option("--input", in_path, "Graph text file")->required();
  c_compress->add_option("--output", out_path, "Output blob path")->required();
  flags.attach(c_compress);
  c_compress->callback([&] {
    const auto g = read_graph(in_path);
    const auto blob = mgz::compress(g, flags.config());
    write_file(out_path, std::string(blob.bytes.begin(), blob.bytes.end()), true);
    const auto info = mgz::inspect_blob(blob, flags.config());
    std::cout << "n=" << info.header.n << '\n'
              << "k=" << info.header.k << '\n'
              << "delta=" << info.header.delta << '\n'
              << "classes=" << info.psi.size() << '\n'
              << "w_size=" << info.w_size << '\n'
              << "first_step_bits=" << info.first_step_bits << '\n'
              << "payload_bits=" << info.header.payload_bits << '\n'
              << "r_size=" << info.r_size << '\n'
              << "bytes=" << blob.bytes.size() << '\n';
  });

  auto* c_decompress = app.add_subcommand("decompress", "Decompress a blob to graph text");
  std::string d_in, d_out;
  c_decompress->add_option("--input", d_in, "Blob path")->required();
  c_decompress->add_option("--output", d_out, "Output graph text path (default stdout)");
  c_decompress->callback([&] {
    const auto blob = read_blob(d_in);
    const auto h = blob.header();
    const auto g = mgz::decompress(blob, mgz::MarkSets::indexed(h.ntheta, h.nxi));
    if (d_out.empty())
      g.to_text(std::cout);
    else
      write_file(d_out, g.to_text(), false);
  });

  auto* c_inspect = app.add_subcommand("inspect", "Print header, type counts and residual size");
  std::string i_in;
  c_inspect->add_option("--input", i_in, "Blob path")->required();
  c_inspect->callback([&] {
    const auto blob = read_blob(i_in);
    const auto info = mgz::inspect_blob(blob);
    const auto& h = info.header;
    std::cout << "n=" << h.n << '\n'
              << "vertex_marks=" << h.ntheta << '\n'
              << "edge_marks=" << h.nxi << '\n'
              << "k=" << h.k << '\n'
              << "delta=" << h.delta << '\n'
              << "payload_bits=" << h.payload_bits << '\n'
              << "classes=" << info.psi.size() << '\n';
    const auto table =
        mgz::ClassTable::build(mgz::MarkSets::indexed(h.ntheta, h.nxi), h.k, h.delta);
    for (std::size_t c = 0; c < info.psi.size(); ++c)
      if (info.psi[c] != 0)
        std::cout << "psi " << table.codes[c].hex() << ' ' << info.psi[c] << '\n';
    std::cout << "w_size=" << info.w_size << '\n'
              << "w_rank=" << info.w_rank << '\n'
              << "r_size=" << info.r_size << '\n';
  });

  auto* c_query = app.add_subcommand("query", "Compressed-domain local queries");
  std::string q_in, q_pattern;
  int q_root = 1;
  bool q_triangles = false;
  c_query->add_option("--input", q_in, "Blob path")->required();
  c_query->add_flag("--triangles", q_triangles, "Count triangles");
  c_query->add_option("--pattern", q_pattern, "Rooted pattern as graph text");
  c_query->add_option("--root", q_root, "Root vertex of the pattern (default 1)");
  c_query->callback([&] {
    const auto blob = read_blob(q_in);
    if (q_triangles) {
      const auto [count, slack] = mgz::triangle_count(blob);
      std::cout << "count=" << count << " slack=" << slack << '\n';
      return;
    }
    if (q_pattern.empty())
      mgz::raise(mgz::errc::parameter_out_of_range, "query needs --triangles or --pattern");
    const auto t = mgz::RootedMarkedGraph::make(read_graph(q_pattern), q_root);
    const auto [count, slack] = mgz::query_pattern_count(blob, t);
    std::cout << "count=" << count << " slack=" << slack << '\n';
  });

  auto* c_stats = app.add_subcommand("stats", "Rate report for a graph under the codec");
  std::string s_in, s_dist_out;
  int s_dist_depth = 1;
  CodecFlags s_flags;
  c_stats->add_option("--input", s_in, "Graph text file")->required();
  s_flags.attach(c_stats);
  c_stats->add_option("--emit-distribution", s_dist_out,
                      "Also write the empirical distribution to this path");
  c_stats->add_option("--at-depth", s_dist_depth, "Depth for --emit-distribution (-1 = full)");
  c_stats->callback([&] {
    const auto g = read_graph(s_in);
    const auto blob = mgz::compress(g, s_flags.config());
    const auto info = mgz::inspect_blob(blob, s_flags.config());
    const auto r = mgz::rate_report(g, blob);
    std::cout << "n=" << r.n << '\n'
              << "m_norm=" << r.m_norm << '\n'
              << "payload_bits=" << blob.header().payload_bits << '\n'
              << "first_step_bits=" << info.first_step_bits << '\n'
              << "nats_used=" << r.nats_used << '\n'
              << "rate=" << r.rate << '\n'
              << "upper_bound=" << r.upper_bound << '\n';
    if (!s_dist_out.empty())
      write_file(s_dist_out, mgz::empirical(g, s_dist_depth).to_text(), false);
  });

  auto* c_lp = app.add_subcommand("lp", "Levy-Prokhorov distance between two distributions");
  std::string lp_a, lp_b;
  bool lp_oracle = false;
  c_lp->add_option("--a", lp_a, "First distribution text file")->required();
  c_lp->add_option("--b", lp_b, "Second distribution text file")->required();
  c_lp->add_flag("--oracle", lp_oracle, "Use the exhaustive subset oracle");
  c_lp->callback([&] {
    std::ifstream fa(lp_a), fb(lp_b);
    if (!fa.good() || !fb.good()) mgz::raise(mgz::errc::parse_error, "cannot open input");
    auto a = mgz::Distribution::parse_text(fa);
    auto b = mgz::Distribution::parse_text(fb);
    if (!(a.full() && b.full())) {
      // compare at the common depth
      const int ha = a.full() ? b.depth() : a.depth();
      const int hb = b.full() ? a.depth() : b.depth();
      const int h = std::min(ha, hb);
      if (a.full() || a.depth() > h) a = mgz::retruncate(a, h);
      if (b.full() || b.depth() > h) b = mgz::retruncate(b, h);
    }
    const auto d = lp_oracle ? mgz::lp_distance_oracle(a, b) : mgz::lp_distance(a, b);
    std::cout << "distance=" << rat_str(d) << '\n';
  });

  auto* c_gen = app.add_subcommand("generate", "Emit a family graph as graph text");
  std::string g_family = "cycle", g_out;
  int g_n = 0;
  double g_alpha = 1.0;
  std::uint64_t g_seed = 0;
  c_gen->add_option("--family", g_family, "cycle | lattice2d | er | bipartite3")->required();
  c_gen->add_option("--n", g_n, "Size parameter")->required();
  c_gen->add_option("--alpha", g_alpha, "Mean degree (er)");
  c_gen->add_option("--seed", g_seed, "PRNG seed (er)");
  c_gen->add_option("--output", g_out, "Output path (default stdout)");
  c_gen->callback([&] {
    const auto g = mgz::generate(parse_family(g_family, g_alpha, g_seed), g_n);
    if (g_out.empty())
      g.to_text(std::cout);
    else
      write_file(g_out, g.to_text(), false);
  });

  auto* c_exp = app.add_subcommand("experiment", "Convergence trace as CSV");
  std::string e_family = "cycle", e_pattern, e_out, e_nlist;
  int e_depth = 1, e_root = 1, e_rootmark = 0, e_pattern_degree = -1;
  double e_alpha = 1.0;
  std::uint64_t e_seed = 0;
  c_exp->add_option("--family", e_family, "cycle | lattice2d | er | bipartite3")->required();
  c_exp->add_option("--depth", e_depth, "Neighborhood depth h");
  c_exp->add_option("--n-list", e_nlist, "Comma-separated sizes")->required();
  c_exp->add_option("--pattern", e_pattern, "Rooted pattern graph text (default: the limit)");
  c_exp->add_option("--root", e_root, "Root of --pattern");
  c_exp->add_option("--root-mark", e_rootmark, "Root mark of the default bipartite3 pattern");
  c_exp->add_option("--pattern-degree", e_pattern_degree,
                    "Depth-1 star pattern with this degree (er default)");
  c_exp->add_option("--alpha", e_alpha, "Mean degree (er)");
  c_exp->add_option("--seed", e_seed, "PRNG seed (er)");
  c_exp->add_option("--output", e_out, "CSV output path (default stdout)");
  c_exp->callback([&] {
    const auto fam = parse_family(e_family, e_alpha, e_seed);
    std::vector<int> ns;
    std::stringstream ss(e_nlist);
    std::string tok;
    while (std::getline(ss, tok, ',')) ns.push_back(std::stoi(tok));
    mgz::RootedMarkedGraph t = [&] {
      if (!e_pattern.empty())
        return mgz::RootedMarkedGraph::make(read_graph(e_pattern), e_root);
      if (fam.kind == mgz::FamilyKind::erdos_renyi) {
        const int d = e_pattern_degree < 0 ? 0 : e_pattern_degree;
        std::vector<mgz::EdgeSpec> es;
        for (int c = 0; c < d; ++c) es.push_back({1, c + 2, 0, 0});
        return mgz::RootedMarkedGraph::make(
            mgz::MarkedGraph::build(mgz::MarkSets::indexed(1, 1), d + 1,
                                    std::vector<int>(static_cast<std::size_t>(d) + 1, 0), es),
            1, 1);
      }
      return mgz::limit_truncation(fam, e_depth, e_rootmark);
    }();
    std::ostringstream csv;
    csv << "n,empirical,limit\n";
    for (const auto& row : mgz::convergence_trace(fam, t, e_depth, ns)) {
      csv << row.n << ',' << rat_str(row.empirical) << ',';
      if (row.limit.exact)
        csv << rat_str(row.limit.rational);
      else
        csv << row.limit.value;
      csv << '\n';
    }
    if (e_out.empty())
      std::cout << csv.str();
    else
      write_file(e_out, csv.str(), false);
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 1;  // usage errors are exit code 1
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const mgz::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}
