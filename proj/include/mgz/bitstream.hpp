// Copyright 2026 the mgz developers.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <vector>

#include "mgz/errors.hpp"
#include "mgz/numeric.hpp"

namespace mgz {

/// Bit string with an exact bit count; bits are packed big-endian within
/// bytes and the final partial byte is zero-padded.
struct BitString {
  std::vector<std::uint8_t> bytes;
  std::size_t nbits = 0;
};

class BitWriter {
 public:
  void put_bit(bool b) {
    if (out_.nbits % 8 == 0) out_.bytes.push_back(0);
    if (b) out_.bytes.back() |= static_cast<std::uint8_t>(0x80u >> (out_.nbits % 8));
    ++out_.nbits;
  }

  /// Writes `width` bits of `value`, most significant first.
  void put(const Int& value, std::size_t width) {
    require(value >= 0 && bit_length(value) <= width, errc::parameter_out_of_range,
            "value does not fit in field width");
    for (std::size_t i = width; i-- > 0;) put_bit(boost::multiprecision::bit_test(value, i));
  }

  void append(const BitString& other) {
    for (std::size_t i = 0; i < other.nbits; ++i)
      put_bit((other.bytes[i / 8] >> (7 - i % 8)) & 1u);
  }

  std::size_t size_bits() const { return out_.nbits; }
  const BitString& result() const { return out_; }
  BitString take() { return std::move(out_); }

 private:
  BitString out_;
};

class BitReader {
 public:
  BitReader(const std::uint8_t* data, std::size_t nbits) : data_(data), nbits_(nbits) {}
  explicit BitReader(const BitString& s) : BitReader(s.bytes.data(), s.nbits) {}

  bool get_bit() {
    require(pos_ < nbits_, errc::malformed_stream, "bit stream exhausted");
    const bool b = (data_[pos_ / 8] >> (7 - pos_ % 8)) & 1u;
    ++pos_;
    return b;
  }

  Int get(std::size_t width) {
    Int v = 0;
    for (std::size_t i = 0; i < width; ++i) {
      v <<= 1;
      if (get_bit()) v |= 1;
    }
    return v;
  }

  std::size_t position() const { return pos_; }
  std::size_t remaining() const { return nbits_ - pos_; }
  bool exhausted() const { return pos_ == nbits_; }

 private:
  const std::uint8_t* data_;
  std::size_t nbits_;
  std::size_t pos_ = 0;
};

/// Unsigned LEB128.
inline void varint_put(std::vector<std::uint8_t>& out, std::uint64_t v) {
  do {
    std::uint8_t b = v & 0x7fu;
    v >>= 7;
    if (v != 0) b |= 0x80u;
    out.push_back(b);
  } while (v != 0);
}

inline std::uint64_t varint_get(const std::vector<std::uint8_t>& in, std::size_t& pos) {
  std::uint64_t v = 0;
  int shift = 0;
  while (true) {
    require(pos < in.size(), errc::malformed_stream, "truncated varint");
    require(shift < 64, errc::malformed_stream, "varint too long");
    const std::uint8_t b = in[pos++];
    v |= static_cast<std::uint64_t>(b & 0x7fu) << shift;
    if ((b & 0x80u) == 0) break;
    shift += 7;
  }
  return v;
}

}  // namespace mgz
