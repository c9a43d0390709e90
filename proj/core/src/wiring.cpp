#include "nsbox/wiring.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>

#include "nsbox/bits.hpp"

namespace nsbox {

GroupSplit::GroupSplit(int n_parties, int k) : n_(n_parties), k_(k) {
  if (n_parties < 2 || n_parties > kMaxParties) {
    throw std::invalid_argument("split party count out of range: " + std::to_string(n_parties));
  }
  if (k < 1 || k >= n_parties) {
    throw std::invalid_argument("split k must satisfy 1 <= k < N, got k=" + std::to_string(k) +
                                " for N=" + std::to_string(n_parties));
  }
}

MergedBipartiteBox::MergedBipartiteBox(GroupSplit split, std::vector<double> table)
    : split_(split), table_(std::move(table)) {
  if (table_.size() != static_cast<std::size_t>(settings()) * 4) {
    throw std::invalid_argument("merged table needs 4 entries per joint input");
  }
}

double MergedBipartiteBox::parity_success() const {
  const std::uint32_t right_mask = split_.right_mask();
  double acc = 0.0;
  for (std::uint32_t x = 0; x < settings(); ++x) {
    const int target = parity(x >> split_.right_bits()) & parity(x & right_mask);
    const auto r = row(x);
    acc += target ? r[1] + r[2] : r[0] + r[3];
  }
  return acc / static_cast<double>(settings());
}

MergedBipartiteBox merge_parties(const ConditionalBox& box, const GroupSplit& split, double tol) {
  if (box.parties() != split.parties()) {
    throw std::invalid_argument("split is for " + std::to_string(split.parties()) +
                                " parties, box has " + std::to_string(box.parties()));
  }
  const double left_leak = block_signaling_discrepancy(box, split.left_mask());
  const double right_leak = block_signaling_discrepancy(box, split.right_mask());
  if (left_leak > tol || right_leak > tol) {
    throw SignalingError("box signals across the cut at k=" + std::to_string(split.k()) +
                         " (discrepancy " + std::to_string(std::max(left_leak, right_leak)) +
                         ")");
  }

  const int kl = split.left_bits();
  const int kr = split.right_bits();
  const std::uint32_t rmask = split.right_mask();
  std::vector<double> table(static_cast<std::size_t>(box.settings()) * 4, 0.0);

  for (std::uint32_t x = 0; x < box.settings(); ++x) {
    const int left_corr = pairwise_parity(x >> kr, kl);
    const int right_corr = pairwise_parity(x & rmask, kr);
    const auto src = box.row(x);
    for (std::uint32_t o = 0; o < src.size(); ++o) {
      if (src[o] == 0.0) continue;
      const int a = parity(o >> kr) ^ left_corr;
      const int b = parity(o & rmask) ^ right_corr;
      table[static_cast<std::size_t>(x) * 4 + static_cast<std::size_t>(a * 2 + b)] += src[o];
    }
  }
  return MergedBipartiteBox(split, std::move(table));
}

ConditionalBox restrict_inputs(const MergedBipartiteBox& merged, InputEmbedding embedding) {
  const auto& split = merged.split();
  if (embedding.left_live < 0 || embedding.left_live >= split.left_bits() ||
      embedding.right_live < 0 || embedding.right_live >= split.right_bits()) {
    throw std::invalid_argument("embedding index out of range for split k=" +
                                std::to_string(split.k()));
  }
  std::vector<double> table(16, 0.0);
  for (std::uint32_t x = 0; x < 2; ++x) {
    for (std::uint32_t y = 0; y < 2; ++y) {
      const std::uint32_t left = x << (split.left_bits() - 1 - embedding.left_live);
      const std::uint32_t right = y << (split.right_bits() - 1 - embedding.right_live);
      const std::uint32_t in2 = (x << 1) | y;
      for (int a = 0; a < 2; ++a) {
        for (int b = 0; b < 2; ++b) {
          table[in2 * 4 + static_cast<std::uint32_t>(a * 2 + b)] = merged(left, right, a, b);
        }
      }
    }
  }
  return ConditionalBox::from_table(2, std::move(table));
}

bool verify_simulation(const ConditionalBox& box, const GroupSplit& split, Bias e) {
  std::optional<MergedBipartiteBox> merged;
  try {
    merged.emplace(merge_parties(box, split));
  } catch (const SignalingError&) {
    return false;
  }

  const ConditionalBox reference = make_bipartite_isotropic(e);
  for (int l = 0; l < split.left_bits(); ++l) {
    for (int r = 0; r < split.right_bits(); ++r) {
      const ConditionalBox bip = restrict_inputs(*merged, {l, r});
      for (std::size_t i = 0; i < bip.table().size(); ++i) {
        if (std::abs(bip.table()[i] - reference.table()[i]) > 1e-9) return false;
      }
    }
  }
  return true;
}

}  // namespace nsbox
