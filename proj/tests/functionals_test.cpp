#include <gtest/gtest.h>

#include <array>
#include <bit>
#include <cmath>
#include <random>

#include "nsbox/functionals.hpp"
#include "test_support.hpp"

namespace nsbox {
namespace {

using fixtures::kSqrtHalf;

TEST(SignTest, MatchesTripartiteOperatorSigns) {
  EXPECT_EQ(sign_v(BitString::parse("000")), 1);
  EXPECT_EQ(sign_v(BitString::parse("011")), -1);
  EXPECT_EQ(sign_v(BitString::parse("100")), 1);
  EXPECT_EQ(sign_v_parity(BitString::parse("000")), 1);
  EXPECT_EQ(sign_v_parity(BitString::parse("111")), -1);

  // + 000, 001, 010, 100;  - 011, 101, 110, 111
  const std::array<std::pair<const char*, int>, 8> terms{{{"000", 1},
                                                         {"001", 1},
                                                         {"010", 1},
                                                         {"100", 1},
                                                         {"011", -1},
                                                         {"101", -1},
                                                         {"110", -1},
                                                         {"111", -1}}};
  for (const auto& [bits, sign] : terms) {
    EXPECT_EQ(sign_v(BitString::parse(bits)), sign) << bits;
    EXPECT_EQ(sign_v_parity(BitString::parse(bits)), sign) << bits;
  }
}

TEST(SignTest, PopcountAndParityFormsAgreeExhaustively) {
  for (int n = 1; n <= 8; ++n) {
    for (std::uint32_t x = 0; x < (1u << n); ++x) {
      const BitString s{x, n};
      ASSERT_EQ(sign_v(s), sign_v_parity(s)) << s.str();
    }
  }
}

TEST(SignTest, SignedSettingsCarryTheSign) {
  for (const auto& s : signed_settings(5)) {
    const int k = s.inputs.popcount();
    EXPECT_EQ(s.sign, (k * (k - 1) / 2) % 2 == 0 ? 1 : -1);
  }
}

// Direct summation over outputs; independent of the library's parity helper.
double correlator_by_hand(const ConditionalBox& box, std::uint32_t x) {
  double acc = 0.0;
  for (std::uint32_t o = 0; o < box.settings(); ++o) {
    int ones = 0;
    for (std::uint32_t t = o; t; t >>= 1) ones += t & 1u;
    acc += (ones % 2 ? -1.0 : 1.0) * box(x, o);
  }
  return acc;
}

TEST(CorrelatorTest, Examples) {
  EXPECT_NEAR(correlator(make_isotropic(3, Bias(1.0)), BitString::parse("000")), 1.0, 1e-12);
  for (std::uint32_t x = 0; x < 8; ++x) {
    EXPECT_NEAR(correlator(make_isotropic(3, Bias(0.0)), BitString{x, 3}), 0.0, 1e-12);
  }
  const auto half = make_isotropic(3, Bias(0.5));
  EXPECT_NEAR(correlator_by_hand(half, 0b011), -0.5, 1e-12);
  EXPECT_NEAR(correlator(half, BitString::parse("011")), -0.5, 1e-12);
}

TEST(CorrelatorTest, EqualsSignTimesParityBias) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 2 + trial % 5;
    const auto box = fixtures::random_ns_box(n, rng);
    for (std::uint32_t x = 0; x < box.settings(); ++x) {
      const BitString s{x, n};
      const double direct = correlator(box, s);
      EXPECT_NEAR(direct, correlator_by_hand(box, x), 1e-12);
      EXPECT_NEAR(direct, sign_v(s) * (2 * parity_success(box, x) - 1), 1e-12);
    }
  }
}

TEST(CorrelatorTest, RejectsLengthMismatch) {
  EXPECT_THROW(correlator(make_isotropic(3, Bias(0.5)), BitString::parse("0000")),
               std::invalid_argument);
}

TEST(SvetlichnyTest, ProbabilityFormOfIsotropicBoxes) {
  for (int n = 2; n <= 6; ++n) {
    for (double e : {0.0, 0.25, 0.5, kSqrtHalf, 0.9, 1.0}) {
      EXPECT_NEAR(svetlichny_probability(make_isotropic(n, Bias(e))), (1 + e) / 2, 1e-12);
    }
  }
  EXPECT_NEAR(svetlichny_probability(make_isotropic(5, Bias(kSqrtHalf))), 0.853553390593, 1e-12);
}

TEST(SvetlichnyTest, ProbabilityFormByFullTableSummation) {
  const auto box = make_isotropic(5, Bias(kSqrtHalf));
  double acc = 0.0;
  for (std::uint32_t x = 0; x < 32; ++x) {
    int pairs = 0;
    for (int i = 0; i < 5; ++i)
      for (int j = i + 1; j < 5; ++j) pairs += bit_at(x, i, 5) & bit_at(x, j, 5);
    for (std::uint32_t o = 0; o < 32; ++o) {
      if ((std::popcount(o) & 1) == (pairs & 1)) acc += box(x, o);
    }
  }
  EXPECT_NEAR(acc / 32, (1 + kSqrtHalf) / 2, 1e-12);
}

TEST(SvetlichnyTest, CorrelatorFormTripartiteValues) {
  EXPECT_NEAR(svetlichny_correlator(make_isotropic(3, Bias(1.0))), 8.0, 1e-9);
  EXPECT_NEAR(svetlichny_correlator(make_isotropic(3, Bias(kSqrtHalf))), 4 * std::sqrt(2.0), 1e-9);
  EXPECT_NEAR(svetlichny_correlator(make_isotropic(3, Bias(0.5))), 4.0, 1e-9);

  // Explicit eight-term operator with signs written out.
  const auto box = make_isotropic(3, Bias(0.3));
  const double s = correlator_by_hand(box, 0b000) + correlator_by_hand(box, 0b001) +
                   correlator_by_hand(box, 0b010) + correlator_by_hand(box, 0b100) -
                   correlator_by_hand(box, 0b011) - correlator_by_hand(box, 0b101) -
                   correlator_by_hand(box, 0b110) - correlator_by_hand(box, 0b111);
  EXPECT_NEAR(svetlichny_correlator(box), std::abs(s), 1e-12);
  EXPECT_NEAR(std::abs(s), 8 * 0.3, 1e-12);
}

TEST(SvetlichnyTest, IdentityHoldsOnRandomNoSignalingBoxes) {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 60; ++trial) {
    const int n = 2 + trial % 5;
    const auto box = fixtures::random_ns_box(n, rng);
    const double scale = std::ldexp(1.0, n);
    EXPECT_NEAR(svetlichny_correlator(box),
                std::abs(2 * scale * svetlichny_probability(box) - scale), 1e-9);
  }
}

TEST(SvetlichnyTest, MonotoneInBias) {
  double previous = -1.0;
  for (int i = 0; i <= 20; ++i) {
    const double value = svetlichny_probability(make_isotropic(4, Bias(i / 20.0)));
    EXPECT_GT(value, previous);
    previous = value;
  }
}

TEST(EvaluateTest, FourPartyQuantumPointSitsOnTheBound) {
  const auto r = evaluate(make_isotropic(4, Bias(kSqrtHalf)));
  EXPECT_EQ(r.n_parties, 4);
  EXPECT_NEAR(r.correlator_value, 8 * std::sqrt(2.0), 1e-9);
  EXPECT_NEAR(r.correlator_value, 11.313708, 1e-6);
  EXPECT_TRUE(r.violates_hybrid_bound);
  EXPECT_FALSE(r.exceeds_quantum);
  EXPECT_FALSE(r.at_algebraic_max);
}

TEST(EvaluateTest, Flags) {
  EXPECT_TRUE(evaluate(make_isotropic(3, Bias(0.6))).violates_hybrid_bound);
  EXPECT_FALSE(evaluate(make_isotropic(3, Bias(0.5))).violates_hybrid_bound);

  const auto uniform = evaluate(make_isotropic(3, Bias(0.0)));
  EXPECT_FALSE(uniform.violates_hybrid_bound);
  EXPECT_FALSE(uniform.exceeds_quantum);
  EXPECT_FALSE(uniform.at_algebraic_max);

  const auto perfect = evaluate(make_isotropic(3, Bias(1.0)));
  EXPECT_TRUE(perfect.violates_hybrid_bound);
  EXPECT_TRUE(perfect.exceeds_quantum);
  EXPECT_TRUE(perfect.at_algebraic_max);

  EXPECT_TRUE(evaluate(make_isotropic(3, Bias(0.71))).exceeds_quantum);
}

TEST(EvaluateTest, HigherPartyCountsScaleWithTwoToTheN) {
  for (int n = 4; n <= 6; ++n) {
    const double scale = std::ldexp(1.0, n);
    for (double e : {0.3, 0.5, 0.8}) {
      EXPECT_NEAR(evaluate(make_isotropic(n, Bias(e))).correlator_value, scale * e, 1e-9);
    }
    EXPECT_NEAR(evaluate(make_isotropic(n, Bias(0.5))).correlator_value, scale / 2, 1e-9);
  }
}

TEST(HybridBoundTest, TripartiteExhaustive) {
  const auto r = hybrid_local_bound(3);
  EXPECT_DOUBLE_EQ(r.value, 0.75);
  // 3 bipartitions x (256 two-party maps x 4 one-party maps).
  EXPECT_EQ(r.strategies_explored, 3u * 256u * 4u);
  ASSERT_EQ(r.witness.size(), 8u);

  const auto witness_box = make_deterministic(3, r.witness);
  EXPECT_DOUBLE_EQ(svetlichny_probability(witness_box), 0.75);
  int correct = 0;
  for (std::uint32_t x = 0; x < 8; ++x) correct += parity_success(witness_box, x) > 0.5;
  EXPECT_EQ(correct, 6);
}

TEST(HybridBoundTest, WitnessFactorsAcrossItsBipartition) {
  const auto r = hybrid_local_bound(3);
  const std::uint32_t left = r.left_mask;
  const std::uint32_t right = 7u & ~left;
  // Left outputs may only depend on left inputs, and likewise on the right.
  for (std::uint32_t x = 0; x < 8; ++x) {
    for (std::uint32_t y = 0; y < 8; ++y) {
      if ((x & left) == (y & left)) EXPECT_EQ(r.witness[x] & left, r.witness[y] & left);
      if ((x & right) == (y & right)) EXPECT_EQ(r.witness[x] & right, r.witness[y] & right);
    }
  }
}

TEST(HybridBoundTest, BipartiteIsClassicalChsh) {
  const auto r = hybrid_local_bound(2);
  EXPECT_DOUBLE_EQ(r.value, 0.75);
  EXPECT_EQ(r.strategies_explored, 16u);
}

TEST(HybridBoundTest, ParityReducedSearchAgrees) {
  for (int n : {2, 3}) {
    EXPECT_DOUBLE_EQ(hybrid_local_bound(n, HybridSearch::kParityReduced).value,
                     hybrid_local_bound(n, HybridSearch::kExhaustive).value);
  }
  const auto four = hybrid_local_bound(4, HybridSearch::kParityReduced);
  EXPECT_DOUBLE_EQ(four.value, 0.75);
  EXPECT_DOUBLE_EQ(svetlichny_probability(make_deterministic(4, four.witness)), 0.75);
}

TEST(HybridBoundTest, RejectsUnsupportedSizes) {
  EXPECT_THROW(hybrid_local_bound(1), std::invalid_argument);
  EXPECT_THROW(hybrid_local_bound(4), std::invalid_argument);
  EXPECT_THROW(hybrid_local_bound(5, HybridSearch::kParityReduced), std::invalid_argument);
}

TEST(HybridBoundTest, IsotropicBoxAtHalfBiasMeetsTheBound) {
  for (int n = 2; n <= 6; ++n) {
    EXPECT_NEAR(svetlichny_probability(make_isotropic(n, Bias(0.5))), kHybridBound, 1e-12);
  }
}

}  // namespace
}  // namespace nsbox
