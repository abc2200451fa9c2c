// Copyright 2026 the mgz developers.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <utility>
#include <vector>

#include "mgz/bitstream.hpp"
#include "mgz/combinadic.hpp"
#include "mgz/errors.hpp"
#include "mgz/marked_graph.hpp"
#include "mgz/numeric.hpp"
#include "mgz/rooted.hpp"
#include "mgz/typeclass.hpp"

namespace mgz {

struct CodecConfig {
  int k = 0;      // 0 = default floor(sqrt(log log n)), floored at 1
  int delta = 0;  // 0 = default floor(log log n), floored at 1
  Int class_budget = Int(1) << 26;
  long long node_budget = 500'000'000;

  static int default_delta(int n) {
    if (n <= 3) return 1;
    return std::max(1, static_cast<int>(std::floor(std::log(std::log(n)))));
  }
  static int default_k(int n) {
    if (n <= 3) return 1;
    return std::max(1, static_cast<int>(std::floor(std::sqrt(std::log(std::log(n))))));
  }

  int resolved_k(int n) const { return k > 0 ? k : default_k(n); }
  int resolved_delta(int n) const { return delta > 0 ? delta : default_delta(n); }
};

struct BlobHeader {
  int n = 0;
  int ntheta = 0;
  int nxi = 0;
  int k = 0;
  int delta = 0;
  std::uint64_t payload_bits = 0;
  std::size_t header_bytes = 0;
};

inline constexpr std::uint8_t kMgzMagic[4] = {0x4D, 0x47, 0x5A, 0x31};  // "MGZ1"
inline constexpr std::uint8_t kMgzVersion = 0x01;

/// Self-delimiting MGZ1 container: magic, version, varints n |Theta| |Xi| k
/// delta and the payload bit length, then the bit-packed payload zero-padded
/// to a byte boundary.
struct CompressedBlob {
  std::vector<std::uint8_t> bytes;

  static CompressedBlob assemble(const BlobHeader& h, const BitString& payload) {
    CompressedBlob b;
    b.bytes.assign(std::begin(kMgzMagic), std::end(kMgzMagic));
    b.bytes.push_back(kMgzVersion);
    varint_put(b.bytes, static_cast<std::uint64_t>(h.n));
    varint_put(b.bytes, static_cast<std::uint64_t>(h.ntheta));
    varint_put(b.bytes, static_cast<std::uint64_t>(h.nxi));
    varint_put(b.bytes, static_cast<std::uint64_t>(h.k));
    varint_put(b.bytes, static_cast<std::uint64_t>(h.delta));
    varint_put(b.bytes, payload.nbits);
    b.bytes.insert(b.bytes.end(), payload.bytes.begin(), payload.bytes.end());
    return b;
  }

  BlobHeader header() const {
    require(bytes.size() >= 5, errc::malformed_stream, "blob shorter than its header");
    require(std::equal(std::begin(kMgzMagic), std::end(kMgzMagic), bytes.begin()),
            errc::bad_magic, "not an MGZ1 stream");
    require(bytes[4] == kMgzVersion, errc::unsupported_version, "unknown MGZ1 version");
    BlobHeader h;
    std::size_t p = 5;
    h.n = static_cast<int>(varint_get(bytes, p));
    h.ntheta = static_cast<int>(varint_get(bytes, p));
    h.nxi = static_cast<int>(varint_get(bytes, p));
    h.k = static_cast<int>(varint_get(bytes, p));
    h.delta = static_cast<int>(varint_get(bytes, p));
    h.payload_bits = varint_get(bytes, p);
    h.header_bytes = p;
    require(h.n >= 1 && h.ntheta >= 1 && h.nxi >= 1 && h.k >= 1 && h.delta >= 1,
            errc::malformed_stream, "bad header fields");
    const std::size_t payload_bytes = (h.payload_bits + 7) / 8;
    require(bytes.size() == h.header_bytes + payload_bytes, errc::malformed_stream,
            "blob length disagrees with declared payload length");
    if (h.payload_bits % 8 != 0) {
      const std::uint8_t pad_mask =
          static_cast<std::uint8_t>(0xffu >> (h.payload_bits % 8));
      require((bytes.back() & pad_mask) == 0, errc::malformed_stream, "nonzero pad bits");
    }
    return h;
  }

  BitReader payload_reader(const BlobHeader& h) const {
    return BitReader(bytes.data() + h.header_bytes, h.payload_bits);
  }
};

namespace detail {

inline std::size_t rank_field_width(const Int& space) {
  return space > 1 ? bit_length(space) : 0;
}

/// Lexicographic index of the pair (a, b), a < b, among pairs of {0..r-1}.
inline long pair_slot_index(long a, long b, long r) {
  return a * r - a * (a + 1) / 2 + (b - a - 1);
}

inline std::pair<long, long> slot_index_pair(long idx, long r) {
  long a = 0;
  while (idx >= r - 1 - a) {
    idx -= r - 1 - a;
    ++a;
  }
  return {a, a + 1 + idx};
}

inline FirstStepParams first_step_params(const MarkSets& marks, int n, const CodecConfig& cfg) {
  FirstStepParams p;
  p.marks = marks;
  p.n = n;
  p.k = cfg.resolved_k(n);
  p.delta = cfg.resolved_delta(n);
  p.class_budget = cfg.class_budget;
  p.node_budget = cfg.node_budget;
  require(p.k >= 1 && p.delta >= 1, errc::parameter_out_of_range,
          "codec depth and degree cap must be >= 1");
  return p;
}

}  // namespace detail

/// compress: trim to max degree delta, first-step-encode the trimmed graph,
/// then encode |R|, the residual set, the per-mark-pair removed-edge counts,
/// the removed-edge slot sets inside R, and one orientation bit per removed
/// edge with distinct marks.
inline CompressedBlob compress(const MarkedGraph& g, const CodecConfig& cfg = {}) {
  const int n = g.n();
  const auto params = detail::first_step_params(g.marks(), n, cfg);
  const auto table = ClassTable::build(params.marks, params.k, params.delta, params.class_budget);

  const MarkedGraph trimmed = g.trim(params.delta);
  const auto residual = g.residual_set(params.delta);
  const long r = static_cast<long>(residual.size());

  BitWriter w;
  w.append(encode_first_step(trimmed, params, table));

  w.put(Int(r), bit_length(Int(n)));
  std::vector<long> r0;
  for (int v : residual) r0.push_back(v - 1);
  w.put(subset_rank(r0), detail::rank_field_width(binomial(n, r)));

  const auto [m_full, u_full] = g.counts();
  const auto [m_trim, u_trim] = trimmed.counts();
  const int npairs = num_mark_pairs(g.num_edge_marks());
  const std::size_t delta_width = bit_length(Int(n) * n);
  std::vector<long long> removed_per_pair(static_cast<std::size_t>(npairs), 0);
  for (int p = 0; p < npairs; ++p) {
    removed_per_pair[p] = m_full.by_pair[p] - m_trim.by_pair[p];
    w.put(Int(removed_per_pair[p]), delta_width);
  }

  // slot id of each removed edge inside sorted R
  std::vector<std::vector<long>> slots_per_pair(static_cast<std::size_t>(npairs));
  std::vector<std::vector<int>> orient_per_pair(static_cast<std::size_t>(npairs));
  const int nxi = g.num_edge_marks();
  for (const auto& [key, mk] : g.edge_map()) {
    if (trimmed.has_edge(key.first, key.second)) continue;
    const long a = std::lower_bound(residual.begin(), residual.end(), key.first) -
                   residual.begin();
    const long b = std::lower_bound(residual.begin(), residual.end(), key.second) -
                   residual.begin();
    const int x = std::min(mk.first, mk.second), xp = std::max(mk.first, mk.second);
    const int p = mark_pair_index(x, xp, nxi);
    slots_per_pair[p].push_back(detail::pair_slot_index(a, b, r));
    // bit 0: mark x toward the smaller-indexed endpoint (key.first)
    if (x != xp) orient_per_pair[p].push_back(mk.second == x ? 0 : 1);
  }
  const Int slot_space = binomial(r, 2);
  for (int p = 0; p < npairs; ++p) {
    auto& slots = slots_per_pair[p];
    // edge_map iteration is not in slot order; orientation bits must follow it
    std::vector<std::size_t> idx(slots.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    std::sort(idx.begin(), idx.end(), [&](std::size_t i, std::size_t j) {
      return slots[i] < slots[j];
    });
    std::vector<long> sorted_slots;
    std::vector<int> sorted_orient;
    for (std::size_t i : idx) {
      sorted_slots.push_back(slots[i]);
      if (!orient_per_pair[p].empty()) sorted_orient.push_back(orient_per_pair[p][i]);
    }
    slots = sorted_slots;
    orient_per_pair[p] = sorted_orient;
    w.put(subset_rank(slots),
          detail::rank_field_width(binomial(slot_space.convert_to<long>(),
                                            static_cast<long>(slots.size()))));
  }
  for (int p = 0; p < npairs; ++p)
    for (int bit : orient_per_pair[p]) w.put_bit(bit != 0);

  BlobHeader h;
  h.n = n;
  h.ntheta = g.num_vertex_marks();
  h.nxi = g.num_edge_marks();
  h.k = params.k;
  h.delta = params.delta;
  const auto payload = w.take();
  h.payload_bits = payload.nbits;
  return CompressedBlob::assemble(h, payload);
}

namespace detail {

struct ResidualParse {
  std::vector<int> residual;                       // sorted vertex ids
  std::vector<long long> removed_per_pair;         // per unordered mark pair
  std::vector<std::vector<long>> slots_per_pair;   // ascending slot ids
  std::vector<std::vector<int>> orient_per_pair;   // one bit per x<x' edge
};

inline ResidualParse read_residual(BitReader& reader, const BlobHeader& h) {
  ResidualParse out;
  const Int r_val = reader.get(bit_length(Int(h.n)));
  require(r_val <= h.n, errc::malformed_stream, "residual size exceeds n");
  const long r = r_val.convert_to<long>();
  const Int rank_r = reader.get(rank_field_width(binomial(h.n, r)));
  require(rank_r < binomial(h.n, r), errc::malformed_stream, "residual rank out of range");
  for (long v0 : subset_unrank(rank_r, r, h.n)) out.residual.push_back(static_cast<int>(v0) + 1);

  const int npairs = num_mark_pairs(h.nxi);
  const std::size_t delta_width = bit_length(Int(h.n) * h.n);
  const Int slot_space = binomial(r, 2);
  for (int p = 0; p < npairs; ++p) {
    const Int d = reader.get(delta_width);
    require(d <= slot_space, errc::malformed_stream, "removed-edge count exceeds slot space");
    out.removed_per_pair.push_back(d.convert_to<long long>());
  }
  for (int p = 0; p < npairs; ++p) {
    const long d = static_cast<long>(out.removed_per_pair[static_cast<std::size_t>(p)]);
    const Int space = binomial(slot_space.convert_to<long>(), d);
    const Int rank = reader.get(rank_field_width(space));
    require(rank < space, errc::malformed_stream, "slot-set rank out of range");
    out.slots_per_pair.push_back(subset_unrank(rank, d, slot_space.convert_to<long>()));
  }
  for (int x = 0; x < h.nxi; ++x)
    for (int xp = x; xp < h.nxi; ++xp) {
      const int p = mark_pair_index(x, xp, h.nxi);
      std::vector<int> bits;
      if (x != xp)
        for (long long e = 0; e < out.removed_per_pair[static_cast<std::size_t>(p)]; ++e)
          bits.push_back(reader.get_bit() ? 1 : 0);
      out.orient_per_pair.push_back(std::move(bits));
    }
  return out;
}

}  // namespace detail

inline MarkedGraph decompress(const CompressedBlob& blob, const MarkSets& marks) {
  const auto h = blob.header();
  marks.validate();
  require(marks.num_vertex_marks() == h.ntheta && marks.num_edge_marks() == h.nxi,
          errc::malformed_stream, "mark alphabets disagree with the header");
  CodecConfig cfg;
  cfg.k = h.k;
  cfg.delta = h.delta;
  const auto params = detail::first_step_params(marks, h.n, cfg);
  const auto table = ClassTable::build(marks, h.k, h.delta, params.class_budget);

  auto reader = blob.payload_reader(h);
  const MarkedGraph trimmed = detail::decode_first_step_fields(reader, params, table);
  const auto res = detail::read_residual(reader, h);
  require(reader.exhausted(), errc::malformed_stream, "payload has trailing bits");

  std::vector<int> tau;
  for (int v = 1; v <= h.n; ++v) tau.push_back(trimmed.vertex_mark(v));
  std::vector<EdgeSpec> edges;
  for (const auto& [key, mk] : trimmed.edge_map())
    edges.push_back({key.first, key.second, mk.first, mk.second});

  const long r = static_cast<long>(res.residual.size());
  std::vector<char> occupied;  // removed-edge slots seen so far
  occupied.assign(static_cast<std::size_t>(r * (r - 1) / 2 > 0 ? r * (r - 1) / 2 : 0), 0);
  for (int x = 0; x < h.nxi; ++x)
    for (int xp = x; xp < h.nxi; ++xp) {
      const int p = mark_pair_index(x, xp, h.nxi);
      const auto& slots = res.slots_per_pair[static_cast<std::size_t>(p)];
      for (std::size_t e = 0; e < slots.size(); ++e) {
        const auto [a, b] = detail::slot_index_pair(slots[e], r);
        const int i = res.residual[static_cast<std::size_t>(a)];
        const int j = res.residual[static_cast<std::size_t>(b)];
        require(!occupied[static_cast<std::size_t>(slots[e])] && !trimmed.has_edge(i, j),
                errc::slot_collision, "removed edge lands on an occupied slot");
        occupied[static_cast<std::size_t>(slots[e])] = 1;
        int to_i = x, to_j = xp;
        if (x != xp && res.orient_per_pair[static_cast<std::size_t>(p)][e] != 0)
          std::swap(to_i, to_j);
        edges.push_back({i, j, to_j, to_i});
      }
    }
  return MarkedGraph::build(marks, h.n, std::move(tau), edges);
}

/// Parsed views of a blob for inspection and compressed-domain queries.
struct BlobBreakdown {
  BlobHeader header;
  std::vector<long long> psi;
  Int w_size = 0;
  Int w_rank = 0;
  std::size_t first_step_bits = 0;
  long long r_size = 0;
};

namespace detail {

inline BlobBreakdown inspect_blob_with(const CompressedBlob& blob, const ClassTable& table,
                                       const CodecConfig& cfg) {
  BlobBreakdown out;
  out.header = blob.header();
  const auto& h = out.header;
  CodecConfig c = cfg;
  c.k = h.k;
  c.delta = h.delta;
  const auto params = detail::first_step_params(table.marks, h.n, c);

  auto reader = blob.payload_reader(h);
  const std::size_t count_width = bit_length(Int(h.n));
  TypeVector psi;
  psi.n = h.n;
  long long total = 0;
  for (int i = 0; i < table.size(); ++i) {
    out.psi.push_back(reader.get(count_width).convert_to<long long>());
    psi.counts.push_back(out.psi.back());
    total += out.psi.back();
  }
  require(total == h.n, errc::malformed_stream, "type counts do not sum to n");
  // |W| is re-derived by counting the same enumeration (never unranked here)
  enumerate_W(psi, params, table, [&](const MarkedGraph&) {
    ++out.w_size;
    return true;
  });
  require(out.w_size > 0, errc::malformed_stream, "declared type class is empty");
  out.w_rank = reader.get(bit_length(out.w_size));
  require(out.w_rank < out.w_size, errc::malformed_stream, "W rank out of range");
  out.first_step_bits = reader.position();
  const Int r_val = reader.get(bit_length(Int(h.n)));
  require(r_val <= h.n, errc::malformed_stream, "residual size exceeds n");
  out.r_size = r_val.convert_to<long long>();
  return out;
}

}  // namespace detail

inline BlobBreakdown inspect_blob(const CompressedBlob& blob, const CodecConfig& cfg = {}) {
  const auto h = blob.header();
  const auto table = ClassTable::build(MarkSets::indexed(h.ntheta, h.nxi), h.k, h.delta,
                                       cfg.class_budget);
  return detail::inspect_blob_with(blob, table, cfg);
}

namespace detail {

/// Bound on the number of vertices whose depth-k view trimming can change:
/// such vertices lie within distance k of R, and edges leave R only through
/// degree-<=delta vertices.
inline long long query_slack(long long r, int k, int delta, int n) {
  if (r == 0) return 0;
  if (k == 1) return std::min<long long>(r, n);
  Int fan = 1, shell = delta;
  for (int t = 1; t <= k; ++t) {
    fan += shell;
    shell *= std::max(1, delta - 1);
  }
  const Int bound = Int(r) * fan;
  return bound > n ? n : bound.convert_to<long long>();
}

}  // namespace detail

/// Number of vertices of the compressed graph whose depth-k view matches t,
/// read straight off the psi section, plus a slack bounding how far the
/// original (untrimmed) graph can differ.
inline std::pair<long long, long long> query_pattern_count(const CompressedBlob& blob,
                                                           const RootedMarkedGraph& t,
                                                           const CodecConfig& cfg = {}) {
  const auto h = blob.header();
  require(t.graph.num_vertex_marks() == h.ntheta && t.graph.num_edge_marks() == h.nxi,
          errc::pattern_out_of_bounds, "pattern mark alphabets disagree with the blob");
  const auto pattern_depth = depth_profile(t.graph, t.root, -1).max_depth();
  require(pattern_depth <= h.k && (t.depth < 0 || t.depth <= h.k), errc::pattern_out_of_bounds,
          "pattern deeper than the encoding depth");
  require(t.graph.max_degree() <= h.delta, errc::pattern_out_of_bounds,
          "pattern exceeds the encoding degree cap");
  const auto table =
      ClassTable::build(MarkSets::indexed(h.ntheta, h.nxi), h.k, h.delta, cfg.class_budget);
  const auto info = detail::inspect_blob_with(blob, table, cfg);
  const int idx = table.find(canonical_code(RootedMarkedGraph::make(t.graph, t.root)));
  if (idx < 0) throw std::logic_error("in-bounds pattern missing from the class enumeration");
  return {info.psi[static_cast<std::size_t>(idx)],
          detail::query_slack(info.r_size, h.k, h.delta, h.n)};
}

/// Triangle count of the compressed graph from the psi section alone; the
/// slack C(|R|,3) bounds the triangles trimming can have removed (every lost
/// triangle lies inside R). Exact when R is empty.
inline std::pair<long long, Int> triangle_count(const CompressedBlob& blob,
                                                const CodecConfig& cfg = {}) {
  const auto h = blob.header();
  const auto table =
      ClassTable::build(MarkSets::indexed(h.ntheta, h.nxi), h.k, h.delta, cfg.class_budget);
  const auto info = detail::inspect_blob_with(blob, table, cfg);
  long long through_roots = 0;
  for (std::size_t c = 0; c < info.psi.size(); ++c) {
    if (info.psi[c] == 0) continue;
    const auto rep = decode_class(table.codes[c]);
    const auto& nbrs = rep.graph.neighbors(rep.root);
    long long tri = 0;
    for (std::size_t i = 0; i < nbrs.size(); ++i)
      for (std::size_t j = i + 1; j < nbrs.size(); ++j)
        if (rep.graph.has_edge(nbrs[i], nbrs[j])) ++tri;
    through_roots += info.psi[c] * tri;
  }
  return {through_roots / 3, binomial(info.r_size, 3)};
}

}  // namespace mgz
