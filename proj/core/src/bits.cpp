#include "nsbox/bits.hpp"

#include <bit>
#include <stdexcept>

namespace nsbox {

BitString BitString::parse(std::string_view text) {
  if (text.empty() || text.size() > 31) {
    throw std::invalid_argument("bit string must have 1..31 characters");
  }
  BitString out;
  out.width = static_cast<int>(text.size());
  for (char c : text) {
    if (c != '0' && c != '1') {
      throw std::invalid_argument("bit string may only contain '0' and '1': " + std::string(text));
    }
    out.value = (out.value << 1) | static_cast<std::uint32_t>(c - '0');
  }
  return out;
}

std::string BitString::str() const { return format_bits(value, width); }

int BitString::popcount() const { return std::popcount(value); }

int pairwise_parity(std::uint32_t inputs, int n) {
  int acc = 0;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      acc ^= bit_at(inputs, i, n) & bit_at(inputs, j, n);
    }
  }
  return acc;
}

std::string format_bits(std::uint32_t value, int width) {
  std::string s(static_cast<std::size_t>(width), '0');
  for (int i = 0; i < width; ++i) {
    if (bit_at(value, i, width)) s[static_cast<std::size_t>(i)] = '1';
  }
  return s;
}

}  // namespace nsbox
