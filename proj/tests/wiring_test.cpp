#include <gtest/gtest.h>

#include <array>
#include <cmath>
#include <random>

#include "nsbox/functionals.hpp"
#include "nsbox/wiring.hpp"
#include "test_support.hpp"

namespace nsbox {
namespace {

using fixtures::kSqrtHalf;

int xor_range(std::uint32_t x, int n, int from, int to) {
  int acc = 0;
  for (int i = from; i < to; ++i) acc ^= bit_at(x, i, n);
  return acc;
}

int pairs_range(std::uint32_t x, int n, int from, int to) {
  int acc = 0;
  for (int i = from; i < to; ++i)
    for (int j = i + 1; j < to; ++j) acc ^= bit_at(x, i, n) & bit_at(x, j, n);
  return acc;
}

TEST(GroupSplitTest, Validates) {
  EXPECT_NO_THROW(GroupSplit(3, 1));
  EXPECT_NO_THROW(GroupSplit(3, 2));
  EXPECT_THROW(GroupSplit(3, 0), std::invalid_argument);
  EXPECT_THROW(GroupSplit(3, 3), std::invalid_argument);
  EXPECT_THROW(GroupSplit(1, 1), std::invalid_argument);
  const GroupSplit s(5, 2);
  EXPECT_EQ(s.left_mask(), 0b11000u);
  EXPECT_EQ(s.right_mask(), 0b00111u);
}

TEST(Gf2Test, PairwiseParityDecomposesAcrossAnyCut) {
  for (int n = 2; n <= 8; ++n) {
    for (int k = 1; k < n; ++k) {
      for (std::uint32_t x = 0; x < (1u << n); ++x) {
        const int whole = pairs_range(x, n, 0, n);
        const int split = pairs_range(x, n, 0, k) ^ pairs_range(x, n, k, n) ^
                          (xor_range(x, n, 0, k) & xor_range(x, n, k, n));
        ASSERT_EQ(whole, split) << "n=" << n << " k=" << k << " x=" << x;
      }
    }
  }
}

TEST(MergeTest, TripartiteFigureTwoCase) {
  for (double e : {0.0, 0.3, kSqrtHalf, 1.0}) {
    const auto merged = merge_parties(make_isotropic(3, Bias(e)), GroupSplit(3, 2));
    for (std::uint32_t x = 0; x < 8; ++x) {
      const int target = (bit_at(x, 0, 3) ^ bit_at(x, 1, 3)) & bit_at(x, 2, 3);
      const auto r = merged.row(x);
      const double hit = target ? r[1] + r[2] : r[0] + r[3];
      EXPECT_NEAR(hit, (1 + e) / 2, 1e-12) << "e=" << e << " x=" << x;
    }
    EXPECT_NEAR(merged.parity_success(), (1 + e) / 2, 1e-12);
  }
}

TEST(MergeTest, FivePartyPerfectBoxAtThreeTwoSplit) {
  const auto merged = merge_parties(make_isotropic(5, Bias(1.0)), GroupSplit(5, 3));
  for (std::uint32_t x = 0; x < 32; ++x) {
    const int target = xor_range(x, 5, 0, 3) & xor_range(x, 5, 3, 5);
    const auto r = merged.row(x);
    EXPECT_NEAR(target ? r[1] + r[2] : r[0] + r[3], 1.0, 1e-12);
  }
}

TEST(MergeTest, UniformStaysUniform) {
  const auto merged = merge_parties(make_isotropic(3, Bias(0.0)), GroupSplit(3, 2));
  for (double p : merged.table()) EXPECT_NEAR(p, 0.25, 1e-12);
  EXPECT_NEAR(merged.parity_success(), 0.5, 1e-12);
}

TEST(MergeTest, RefusesSignalingAcrossTheCut) {
  EXPECT_THROW(merge_parties(fixtures::signaling_pair(), GroupSplit(2, 1)), SignalingError);
  EXPECT_THROW(merge_parties(make_isotropic(3, Bias(0.5)), GroupSplit(4, 2)),
               std::invalid_argument);
}

TEST(MergeTest, AcceptsBoxesThatOnlySignalInsideABlock) {
  // Parties 1 and 2 share a deterministic map a = x*y, b = 0; party 3 outputs 0.
  std::vector<std::uint32_t> outputs(8);
  for (std::uint32_t x = 0; x < 8; ++x) {
    const std::uint32_t a = bit_at(x, 0, 3) & bit_at(x, 1, 3);
    outputs[x] = a << 2;
  }
  const auto box = make_deterministic(3, outputs);
  EXPECT_FALSE(verify_no_signaling(box).no_signaling);
  EXPECT_NO_THROW(merge_parties(box, GroupSplit(3, 2)));
  EXPECT_THROW(merge_parties(box, GroupSplit(3, 1)), SignalingError);
}

TEST(MergeTest, PreservesCrossCutNoSignalingOnRandomMixtures) {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 30; ++trial) {
    const int n = 2 + trial % 5;
    const int k = 1 + trial % (n - 1);
    const GroupSplit split(n, k);
    const auto merged = merge_parties(fixtures::random_ns_box(n, rng), split);
    const std::uint32_t left_count = 1u << split.left_bits();
    const std::uint32_t right_count = 1u << split.right_bits();
    for (std::uint32_t l = 0; l < left_count; ++l) {
      for (std::uint32_t r = 0; r < right_count; ++r) {
        double norm = 0.0;
        for (double p : merged.row((l << split.right_bits()) | r)) norm += p;
        EXPECT_NEAR(norm, 1.0, 1e-12);
        // P(A) must not depend on the right inputs, P(B) not on the left ones.
        const double pa = merged(l, r, 0, 0) + merged(l, r, 0, 1);
        const double pa_ref = merged(l, 0, 0, 0) + merged(l, 0, 0, 1);
        EXPECT_NEAR(pa, pa_ref, 1e-12);
        const double pb = merged(l, r, 0, 0) + merged(l, r, 1, 0);
        const double pb_ref = merged(0, r, 0, 0) + merged(0, r, 1, 0);
        EXPECT_NEAR(pb, pb_ref, 1e-12);
      }
    }
  }
}

void expect_tables_near(const ConditionalBox& a, const ConditionalBox& b, double tol) {
  ASSERT_EQ(a.table().size(), b.table().size());
  for (std::size_t i = 0; i < a.table().size(); ++i) EXPECT_NEAR(a.table()[i], b.table()[i], tol);
}

TEST(RestrictTest, TripartiteQuantumPoint) {
  const auto merged = merge_parties(make_isotropic(3, Bias(kSqrtHalf)), GroupSplit(3, 2));
  // Live bits x (first of the left block) and z; y pinned to 0.
  expect_tables_near(restrict_inputs(merged, {0, 0}), make_bipartite_isotropic(Bias(kSqrtHalf)),
                     1e-12);
}

TEST(RestrictTest, UniformToUniform) {
  const auto merged = merge_parties(make_isotropic(4, Bias(0.0)), GroupSplit(4, 2));
  expect_tables_near(restrict_inputs(merged, {1, 0}), make_bipartite_isotropic(Bias(0.0)), 1e-12);
}

TEST(RestrictTest, AllEmbeddingsAgree) {
  const auto merged = merge_parties(make_isotropic(4, Bias(0.9)), GroupSplit(4, 2));
  const auto first = restrict_inputs(merged, {0, 0});
  for (int l = 0; l < 2; ++l)
    for (int r = 0; r < 2; ++r) expect_tables_near(restrict_inputs(merged, {l, r}), first, 0.0);
}

TEST(RestrictTest, RejectsBadEmbedding) {
  const auto merged = merge_parties(make_isotropic(3, Bias(0.5)), GroupSplit(3, 2));
  EXPECT_THROW(restrict_inputs(merged, {2, 0}), std::invalid_argument);
  EXPECT_THROW(restrict_inputs(merged, {0, 1}), std::invalid_argument);
  EXPECT_THROW(restrict_inputs(merged, {-1, 0}), std::invalid_argument);
}

TEST(RestrictTest, CommutesWithMixtures) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 10; ++trial) {
    const int n = 3 + trial % 3;
    const GroupSplit split(n, 1 + trial % (n - 1));
    const std::vector<ConditionalBox> parts{fixtures::random_ns_box(n, rng),
                                            fixtures::random_ns_box(n, rng)};
    const std::array<double, 2> w{0.35, 0.65};
    const auto lhs = restrict_inputs(merge_parties(mixture(parts, w), split), {0, 0});
    const std::vector<ConditionalBox> restricted{restrict_inputs(merge_parties(parts[0], split), {0, 0}),
                                                 restrict_inputs(merge_parties(parts[1], split), {0, 0})};
    expect_tables_near(lhs, mixture(restricted, w), 1e-12);
  }
}

TEST(VerifySimulationTest, Examples) {
  EXPECT_TRUE(verify_simulation(make_isotropic(3, Bias(0.7)), GroupSplit(3, 2), Bias(0.7)));
  EXPECT_TRUE(verify_simulation(make_isotropic(6, Bias(1.0)), GroupSplit(6, 1), Bias(1.0)));
  EXPECT_TRUE(verify_simulation(make_isotropic(3, Bias(0.0)), GroupSplit(3, 2), Bias(0.0)));
  EXPECT_FALSE(verify_simulation(make_isotropic(3, Bias(0.7)), GroupSplit(3, 2), Bias(0.6)));
  EXPECT_FALSE(verify_simulation(fixtures::signaling_pair(), GroupSplit(2, 1), Bias(1.0)));
}

TEST(VerifySimulationTest, EverySplitLeadsToTheSameBipartiteBox) {
  for (int n = 2; n <= 6; ++n) {
    for (int k = 1; k < n; ++k) {
      for (double e : {0.0, 0.3, 0.5, kSqrtHalf, 0.9, 1.0}) {
        EXPECT_TRUE(verify_simulation(make_isotropic(n, Bias(e)), GroupSplit(n, k), Bias(e)))
            << "n=" << n << " k=" << k << " e=" << e;
      }
    }
  }
}

}  // namespace
}  // namespace nsbox
