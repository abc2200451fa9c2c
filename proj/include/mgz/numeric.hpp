// Copyright 2026 the mgz developers.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <cstdint>

#include "mgz/errors.hpp"

namespace mgz {

using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

inline Int factorial(long n) {
  require(n >= 0, errc::negative_input, "factorial of negative");
  Int r = 1;
  for (long i = 2; i <= n; ++i) r *= i;
  return r;
}

inline Int binomial(long n, long k) {
  if (k < 0 || n < 0 || k > n) return 0;
  if (k > n - k) k = n - k;
  Int r = 1;
  for (long i = 1; i <= k; ++i) {
    r *= (n - k + i);
    r /= i;
  }
  return r;
}

/// Number of bits of v (0 for v == 0). For a value space of size s >= 1 this
/// equals the paper's field width 1 + floor(log2 s).
inline std::size_t bit_length(const Int& v) {
  if (v <= 0) return 0;
  return boost::multiprecision::msb(v) + 1;
}

/// Natural log of a positive big integer, usable far beyond double range.
inline double ln(const Int& v) {
  require(v > 0, errc::negative_input, "ln of non-positive integer");
  const std::size_t bits = bit_length(v);
  if (bits <= 1000) return std::log(v.convert_to<double>());
  const std::size_t shift = bits - 64;
  const Int top = v >> shift;
  return std::log(top.convert_to<double>()) + static_cast<double>(shift) * std::log(2.0);
}

inline double to_double(const Rat& r) {
  return boost::multiprecision::numerator(r).convert_to<double>() /
         boost::multiprecision::denominator(r).convert_to<double>();
}

}  // namespace mgz
