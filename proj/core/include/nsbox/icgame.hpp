#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "nsbox/box.hpp"

namespace nsbox {

/// Deepest concatenation handled by exact enumeration (7 boxes, 8-bit database).
inline constexpr int kMaxExactRacDepth = 3;
/// Deepest concatenation for which per-address results are materialized.
inline constexpr int kMaxEndToEndDepth = 20;

/// Outcome of an information-causality game with an N-bit database and an
/// n-bit message.
struct ICGameResult {
  int n_database_bits = 0;
  int n_message_bits = 0;
  std::vector<double> success_probs;  // p_k, one per task index
  double i_exact = 0.0;               // sum_k I(a_k : g | l = k), bits
  double i_fano = 0.0;                // N - sum_k h(p_k), bits
  bool violates_ic = false;           // max(i_exact, i_fano) > n
};

/// One level of the concatenated random access code.
struct RacLevel {
  int depth = 0;
  double bias = 0.0;
  double per_bit_success = 0.0;
  double i_fano = 0.0;   // 2^depth (1 - h(p)) for a 2^depth-bit database, one message bit
  double i_exact = 0.0;  // exact mutual information summed over addresses
};

/// Joint distribution of two discrete variables, row-major.
class JointDistribution {
 public:
  JointDistribution(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), p_(rows * cols, 0.0) {}
  JointDistribution(std::size_t rows, std::size_t cols, std::vector<double> p);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  double& at(std::size_t u, std::size_t v) { return p_[u * cols_ + v]; }
  double at(std::size_t u, std::size_t v) const { return p_[u * cols_ + v]; }
  std::span<const double> values() const { return p_; }

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<double> p_;
};

/// h(p) in bits with 0 log 0 = 0. Throws std::invalid_argument outside [0, 1].
double binary_entropy(double p);

/// 1 - h((1 + d) / 2) for d in [-1, 1], accurate when d is tiny.
double bias_capacity(double d);

/// Shannon mutual information in bits. Throws std::invalid_argument if the
/// joint does not sum to 1 within 1e-9 or has negative entries.
double mutual_information(const JointDistribution& joint);

/// Three-party guessing game: x, y uniform; Carol's input z selects the task
/// (z = 0 guess x, z = 1 guess y); message m = a^b^xy^x and guess g = c^m.
/// Requires a three-party no-signaling box.
ICGameResult tripartite_guess_game(const ConditionalBox& box);

/// Exact per-address behaviour of the binary-tree random access code built
/// from copies of a bipartite box.
struct RacEnumeration {
  int depth = 0;
  std::vector<double> success_by_address;
  std::vector<JointDistribution> joints;  // (a_l, g) for each address l
};

/// Enumerates every database, address, and joint outcome of the 2^depth - 1
/// boxes. depth must lie in [1, kMaxExactRacDepth]; the box must be bipartite.
RacEnumeration enumerate_rac(const ConditionalBox& bipartite, int depth);

/// Exact enumeration over copies of make_bipartite_isotropic(e).
RacLevel concatenated_rac_exact(Bias e, int depth);

/// Closed form p = (1 + e^depth) / 2. depth >= 1.
RacLevel concatenated_rac_analytic(Bias e, int depth);

/// Smallest depth in [1, k_max] with i_fano > 1, if any.
std::optional<int> ic_violation_scan(Bias e, int k_max);

struct ScanRow {
  double e = 0.0;
  std::optional<int> k;
  double p = 0.0;       // at the found depth, or at k_max when none
  double i_fano = 0.0;  // same depth as p
  bool violates = false;
};

/// Runs ic_violation_scan over a grid; rows follow grid order.
std::vector<ScanRow> ic_threshold_sweep(std::span<const double> grid, int k_max);

/// Merge (left block 1..split_k) + restrict (first bit of each block live) +
/// concatenated RAC of the given depth on the resulting bipartite box. Uses the
/// closed form when the bipartite box is isotropic and exact enumeration
/// otherwise (depth <= kMaxExactRacDepth).
ICGameResult multipartite_ic(const ConditionalBox& box, int split_k, int depth);

/// multipartite_ic applied to make_isotropic(n_parties, e).
ICGameResult end_to_end_multipartite_ic(int n_parties, Bias e, int split_k, int depth);

}  // namespace nsbox
