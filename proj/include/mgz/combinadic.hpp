// Copyright 2026 the mgz developers.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <vector>

#include "mgz/errors.hpp"
#include "mgz/numeric.hpp"

// Combinatorial number system: bijection between k-subsets of {0..n-1} and
// ranks in [0, C(n,k)), in colexicographic order.

namespace mgz {

/// `elems` strictly increasing, values in [0, n). Rank is independent of n.
inline Int subset_rank(const std::vector<long>& elems) {
  Int r = 0;
  for (std::size_t i = 0; i < elems.size(); ++i) r += binomial(elems[i], static_cast<long>(i) + 1);
  return r;
}

inline std::vector<long> subset_unrank(Int rank, long k, long n) {
  require(rank >= 0 && rank < binomial(n, k), errc::rank_out_of_range, "subset rank out of range");
  std::vector<long> out(static_cast<std::size_t>(k));
  long c = n;
  for (long i = k; i >= 1; --i) {
    --c;
    while (binomial(c, i) > rank) --c;
    out[static_cast<std::size_t>(i - 1)] = c;
    rank -= binomial(c, i);
  }
  return out;
}

}  // namespace mgz
