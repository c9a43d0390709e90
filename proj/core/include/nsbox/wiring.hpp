#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "nsbox/box.hpp"

namespace nsbox {

/// Partition of parties 1..N into a left block 1..k and a right block k+1..N.
class GroupSplit {
 public:
  /// Throws std::invalid_argument unless 2 <= N <= kMaxParties and 1 <= k < N.
  GroupSplit(int n_parties, int k);

  int parties() const { return n_; }
  int k() const { return k_; }
  int left_bits() const { return k_; }
  int right_bits() const { return n_ - k_; }
  /// Mask of left-block parties in the BitString layout.
  std::uint32_t left_mask() const { return ((1u << k_) - 1u) << (n_ - k_); }
  std::uint32_t right_mask() const { return (1u << (n_ - k_)) - 1u; }

 private:
  int n_;
  int k_;
};

/// Bipartite box whose two sides carry k and N-k input bits and one output bit
/// each. Indexed by the original N-bit input string; the left block's inputs
/// are its leading k bits.
class MergedBipartiteBox {
 public:
  MergedBipartiteBox(GroupSplit split, std::vector<double> table);

  const GroupSplit& split() const { return split_; }
  std::uint32_t settings() const { return 1u << split_.parties(); }

  double operator()(std::uint32_t inputs, int a, int b) const {
    return table_[static_cast<std::size_t>(inputs) * 4 + static_cast<std::size_t>(a * 2 + b)];
  }
  double operator()(std::uint32_t left_inputs, std::uint32_t right_inputs, int a, int b) const {
    return (*this)((left_inputs << split_.right_bits()) | right_inputs, a, b);
  }
  /// P(A, B | inputs) for AB in 00, 01, 10, 11.
  std::span<const double> row(std::uint32_t inputs) const {
    return {table_.data() + static_cast<std::size_t>(inputs) * 4, 4};
  }
  std::span<const double> table() const { return table_; }

  /// Average over joint inputs of P(A xor B = (XOR left inputs)(XOR right inputs)).
  double parity_success() const;

 private:
  GroupSplit split_;
  std::vector<double> table_;
};

/// Pushes the box through A = XOR_{i<=k} a_i xor XOR_{i<j<=k} x_i x_j and
/// B = XOR_{i>k} a_i xor XOR_{k<i<j} x_i x_j. Throws SignalingError if either
/// block's outputs depend on the other block's inputs beyond `tol`.
MergedBipartiteBox merge_parties(const ConditionalBox& box, const GroupSplit& split,
                                 double tol = kProbabilityTolerance);

/// One live input bit per side; every other input bit is pinned to 0.
struct InputEmbedding {
  int left_live = 0;   // 0-based index within the left block
  int right_live = 0;  // 0-based index within the right block
};

/// Reduces a merged box to a standard one-bit-per-side bipartite box.
ConditionalBox restrict_inputs(const MergedBipartiteBox& merged, InputEmbedding embedding);

/// Checks that merge + restrict of `box` matches make_bipartite_isotropic(e)
/// within 1e-9 for every embedding. Returns false on mismatch or if the box
/// signals across the cut.
bool verify_simulation(const ConditionalBox& box, const GroupSplit& split, Bias e);

}  // namespace nsbox
