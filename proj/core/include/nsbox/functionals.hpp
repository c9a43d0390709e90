#pragma once

#include <cstdint>
#include <vector>

#include "nsbox/bits.hpp"
#include "nsbox/box.hpp"

namespace nsbox {

/// Average Svetlichny success probability attainable by hybrid (bipartition-local) models.
inline constexpr double kHybridBound = 0.75;
/// Average success at the quantum bound, (1 + sqrt(2)/2) / 2.
inline constexpr double kQuantumSuccess = 0.85355339059327376220;
/// Width of the equality band used for the algebraic-maximum flag.
inline constexpr double kAlgebraicBand = 1e-9;
/// Strict threshold flags must clear the bound by more than this rounding slack.
inline constexpr double kStrictMargin = 1e-12;

struct SvetlichnyReport {
  int n_parties = 0;
  double avg_probability = 0.0;
  double correlator_value = 0.0;
  bool violates_hybrid_bound = false;
  bool exceeds_quantum = false;
  bool at_algebraic_max = false;
};

/// An input string together with its Svetlichny sign.
struct SignedSetting {
  BitString inputs;
  int sign = 1;
};

/// (-1)^{k(k-1)/2} with k the number of ones in `inputs`.
int sign_v(BitString inputs);

/// (-1)^{XOR_{i<j} x_i x_j}, computed from the pairwise products.
int sign_v_parity(BitString inputs);

/// All 2^N settings with their signs, in lexicographic order.
std::vector<SignedSetting> signed_settings(int n_parties);

/// E(A_1...A_N | x) = sum_o P(o|x) (-1)^{parity(o)}.
double correlator(const ConditionalBox& box, BitString inputs);

/// Probability that the output parity equals XOR_{i<j} x_i x_j at input x.
double parity_success(const ConditionalBox& box, std::uint32_t inputs);

/// (1/2^N) sum_x P(XOR_i a_i = XOR_{i<j} x_i x_j | x).
double svetlichny_probability(const ConditionalBox& box);

/// |sum_x v(x) E(A_1...A_N | x)|.
double svetlichny_correlator(const ConditionalBox& box);

/// Both forms plus threshold flags. Throws std::logic_error if the two forms
/// disagree with 2^{N+1} avg - 2^N beyond 1e-9.
SvetlichnyReport evaluate(const ConditionalBox& box);

enum class HybridSearch {
  /// Every deterministic map from a group's inputs to its full output string.
  kExhaustive,
  /// Every Boolean function of a group's inputs, used as the group's output parity.
  kParityReduced,
};

struct HybridBoundResult {
  double value = 0.0;
  /// Parties in the first block of the winning bipartition (BitString layout).
  std::uint32_t left_mask = 0;
  /// Winning strategy: output string for every input string.
  std::vector<std::uint32_t> witness;
  std::uint64_t strategies_explored = 0;
};

/// Maximum of svetlichny_probability over all bipartitions into two non-empty
/// groups and all deterministic group strategies. Supports N in {2, 3} with the
/// exhaustive search and N in {2, 3, 4} with the parity-reduced search. Ties
/// keep the first strategy in enumeration order.
HybridBoundResult hybrid_local_bound(int n_parties,
                                     HybridSearch search = HybridSearch::kExhaustive);

}  // namespace nsbox
