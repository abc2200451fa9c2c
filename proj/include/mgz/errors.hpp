// Copyright 2026 the mgz developers.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace mgz {

enum class errc {
  self_loop,
  duplicate_edge,
  unknown_mark,
  vertex_out_of_range,
  not_a_permutation,
  depth_profile_mismatch,
  budget_exceeded,
  degree_bound_violated,
  rank_out_of_range,
  empty_type_class,
  malformed_stream,
  slot_collision,
  bad_magic,
  unsupported_version,
  support_too_large,
  depth_too_small,
  negative_input,
  parameter_out_of_range,
  unsupported_depth,
  pattern_out_of_bounds,
  parse_error,
};

inline const char* errc_name(errc c) {
  switch (c) {
    case errc::self_loop: return "SelfLoop";
    case errc::duplicate_edge: return "DuplicateEdge";
    case errc::unknown_mark: return "UnknownMark";
    case errc::vertex_out_of_range: return "VertexOutOfRange";
    case errc::not_a_permutation: return "NotAPermutation";
    case errc::depth_profile_mismatch: return "DepthProfileMismatch";
    case errc::budget_exceeded: return "BudgetExceeded";
    case errc::degree_bound_violated: return "DegreeBoundViolated";
    case errc::rank_out_of_range: return "RankOutOfRange";
    case errc::empty_type_class: return "EmptyTypeClass";
    case errc::malformed_stream: return "MalformedStream";
    case errc::slot_collision: return "SlotCollision";
    case errc::bad_magic: return "BadMagic";
    case errc::unsupported_version: return "UnsupportedVersion";
    case errc::support_too_large: return "SupportTooLarge";
    case errc::depth_too_small: return "DepthTooSmall";
    case errc::negative_input: return "NegativeInput";
    case errc::parameter_out_of_range: return "ParameterOutOfRange";
    case errc::unsupported_depth: return "UnsupportedDepth";
    case errc::pattern_out_of_bounds: return "PatternOutOfBounds";
    case errc::parse_error: return "ParseError";
  }
  return "UnknownError";
}

/// Library-wide exception; carries a machine-checkable code.
class Error : public std::runtime_error {
 public:
  Error(errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}
  errc code() const noexcept { return code_; }

 private:
  errc code_;
};

[[noreturn]] inline void raise(errc code, const std::string& what) { throw Error(code, what); }

inline void require(bool cond, errc code, const std::string& what) {
  if (!cond) raise(code, what);
}

}  // namespace mgz
