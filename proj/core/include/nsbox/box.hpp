#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "nsbox/bits.hpp"

namespace nsbox {

/// Tolerance used when validating probabilities (normalization, no-signaling).
inline constexpr double kProbabilityTolerance = 1e-9;

/// Raised when an operation that requires a no-signaling box receives one that signals.
class SignalingError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Isotropy parameter E of the isotropic box families, 0 <= E <= 1.
class Bias {
 public:
  explicit Bias(double e);
  double value() const { return e_; }

 private:
  double e_;
};

/// Full conditional table P(outputs | inputs) of an N-party box with one input
/// bit and one output bit per party. Entries are stored row-major: row = input
/// string, column = output string, both in the BitString index layout.
class ConditionalBox {
 public:
  /// Validates shape (2^N x 2^N) and that every entry is a finite value in [0, 1].
  /// Normalization and no-signaling are reported by verify_no_signaling.
  static ConditionalBox from_table(int n_parties, std::vector<double> table);

  int parties() const { return n_; }
  /// Number of input strings (equal to the number of output strings), 2^N.
  std::uint32_t settings() const { return 1u << n_; }

  double operator()(std::uint32_t inputs, std::uint32_t outputs) const {
    return table_[static_cast<std::size_t>(inputs) * settings() + outputs];
  }
  std::span<const double> row(std::uint32_t inputs) const {
    return {table_.data() + static_cast<std::size_t>(inputs) * settings(), settings()};
  }
  std::span<const double> table() const { return table_; }

  /// True for deterministic strategy boxes built by make_deterministic. These
  /// are building blocks for local-bound searches, not physical boxes.
  bool strategy_atom() const { return strategy_atom_; }

 private:
  ConditionalBox(int n, std::vector<double> table, bool atom)
      : n_(n), table_(std::move(table)), strategy_atom_(atom) {}

  int n_;
  std::vector<double> table_;
  bool strategy_atom_;

  friend ConditionalBox make_deterministic(int, std::span<const std::uint32_t>);
};

/// Isotropic N-party box: for every input string x the output parity equals
/// XOR_{i<j} x_i x_j with probability (1+e)/2, spread uniformly over the
/// 2^{N-1} output strings of each parity class.
ConditionalBox make_isotropic(int n_parties, Bias e);

/// Bipartite isotropic box P(a xor b = xy) = (1+e)/2; e = 1 is the PR box.
ConditionalBox make_bipartite_isotropic(Bias e);

/// Deterministic strategy box: probability 1 on outputs[x] for each input x.
/// `outputs` must hold exactly 2^N entries. The result is flagged strategy_atom().
ConditionalBox make_deterministic(int n_parties, std::span<const std::uint32_t> outputs);

/// Response of a single party: output when its input is 0 and when it is 1.
struct LocalResponse {
  int if_zero = 0;
  int if_one = 0;
};

/// Local deterministic box where each party's output depends only on its own
/// input. Always no-signaling.
ConditionalBox make_local_deterministic(int n_parties, std::span<const LocalResponse> responses);

/// Convex combination sum_i weights[i] * boxes[i]. Weights must be non-negative
/// and sum to 1; boxes must share a party count.
ConditionalBox mixture(std::span<const ConditionalBox> boxes, std::span<const double> weights);

struct NoSignalingReport {
  bool normalized = false;
  bool no_signaling = false;
  double max_marginal_discrepancy = 0.0;
  double max_normalization_error = 0.0;
};

/// Checks per-input normalization and, for every party i and every pair of
/// input strings differing only in party i's bit, equality of the marginal
/// over the other parties' outputs.
NoSignalingReport verify_no_signaling(const ConditionalBox& box,
                                      double tol = kProbabilityTolerance);

/// Largest change of the marginal over `observed_mask`'s outputs when only
/// inputs outside `observed_mask` vary. Masks use the BitString layout.
double block_signaling_discrepancy(const ConditionalBox& box, std::uint32_t observed_mask);

/// Draws one output string for `inputs`. Deterministic in `seed`.
BitString sample(const ConditionalBox& box, BitString inputs, std::uint64_t seed);

/// Draws `count` outputs from a single seeded stream.
std::vector<std::uint32_t> sample_many(const ConditionalBox& box, BitString inputs,
                                       std::uint64_t seed, std::size_t count);

/// Exact marginal over the given 0-based parties, indexed by the subset's
/// output string (first listed party leftmost).
std::vector<double> marginal(const ConditionalBox& box, std::span<const int> parties,
                             BitString inputs);

}  // namespace nsbox
