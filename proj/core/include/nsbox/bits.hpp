#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace nsbox {

/// Largest party count handled by the dense table representation (2^20 entries).
inline constexpr int kMaxParties = 10;

/// A string of N bits, one per party. Party 1 is the leftmost character of the
/// textual form and the most significant bit of `value`, so the integer order
/// of `value` matches lexicographic order of the strings.
struct BitString {
  std::uint32_t value = 0;
  int width = 0;

  /// Parses a string of '0'/'1' characters. Throws std::invalid_argument.
  static BitString parse(std::string_view text);

  std::string str() const;

  /// Bit of the given 0-based party (0 is the leftmost).
  int bit(int party) const { return static_cast<int>((value >> (width - 1 - party)) & 1u); }

  int popcount() const;

  friend bool operator==(const BitString&, const BitString&) = default;
};

/// Bit of 0-based `party` in an n-bit index laid out as in BitString.
constexpr int bit_at(std::uint32_t index, int party, int n) {
  return static_cast<int>((index >> (n - 1 - party)) & 1u);
}

/// XOR of all bits.
constexpr int parity(std::uint32_t v) {
  v ^= v >> 16;
  v ^= v >> 8;
  v ^= v >> 4;
  v ^= v >> 2;
  v ^= v >> 1;
  return static_cast<int>(v & 1u);
}

/// Pairwise-product parity  XOR_{i<j} x_i x_j  of an n-bit input string,
/// evaluated as an explicit double loop over pairs.
int pairwise_parity(std::uint32_t inputs, int n);

std::string format_bits(std::uint32_t value, int width);

}  // namespace nsbox
