#include "nsbox/icgame.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "nsbox/bits.hpp"
#include "nsbox/functionals.hpp"
#include "nsbox/wiring.hpp"

namespace nsbox {

JointDistribution::JointDistribution(std::size_t rows, std::size_t cols, std::vector<double> p)
    : rows_(rows), cols_(cols), p_(std::move(p)) {
  if (p_.size() != rows_ * cols_) throw std::invalid_argument("joint table shape mismatch");
}

double binary_entropy(double p) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw std::invalid_argument("binary_entropy needs p in [0, 1], got " + std::to_string(p));
  }
  auto term = [](double q) { return q > 0.0 ? -q * std::log2(q) : 0.0; };
  return term(p) + term(1.0 - p);
}

double bias_capacity(double d) {
  if (!(d >= -1.0 && d <= 1.0)) {
    throw std::invalid_argument("bias_capacity needs d in [-1, 1], got " + std::to_string(d));
  }
  const double a = std::abs(d);
  if (a == 1.0) return 1.0;
  // (1+d)ln(1+d) + (1-d)ln(1-d) rewritten so the leading d terms never cancel.
  return (std::log1p(-a * a) + 2.0 * a * std::atanh(a)) / (2.0 * std::numbers::ln2);
}

double mutual_information(const JointDistribution& joint) {
  std::vector<double> pu(joint.rows(), 0.0);
  std::vector<double> pv(joint.cols(), 0.0);
  double total = 0.0;
  for (std::size_t u = 0; u < joint.rows(); ++u) {
    for (std::size_t v = 0; v < joint.cols(); ++v) {
      const double p = joint.at(u, v);
      if (p < 0.0) throw std::invalid_argument("joint distribution has a negative entry");
      pu[u] += p;
      pv[v] += p;
      total += p;
    }
  }
  if (std::abs(total - 1.0) > kProbabilityTolerance) {
    throw std::invalid_argument("joint distribution sums to " + std::to_string(total));
  }
  double mi = 0.0;
  for (std::size_t u = 0; u < joint.rows(); ++u) {
    for (std::size_t v = 0; v < joint.cols(); ++v) {
      const double p = joint.at(u, v);
      if (p > 0.0) mi += p * std::log2(p / (pu[u] * pv[v]));
    }
  }
  return std::max(mi, 0.0);
}

namespace {

void require_no_signaling(const ConditionalBox& box) {
  const auto report = verify_no_signaling(box);
  if (!report.normalized) {
    throw std::invalid_argument("box is not normalized (error " +
                                std::to_string(report.max_normalization_error) + ")");
  }
  if (!report.no_signaling) {
    throw SignalingError("box signals (discrepancy " +
                         std::to_string(report.max_marginal_discrepancy) + ")");
  }
}

double fano_bound(std::span<const double> success) {
  double acc = static_cast<double>(success.size());
  for (double p : success) acc -= binary_entropy(std::clamp(p, 0.0, 1.0));
  return acc;
}

}  // namespace

ICGameResult tripartite_guess_game(const ConditionalBox& box) {
  if (box.parties() != 3) {
    throw std::invalid_argument("tripartite game needs a 3-party box, got " +
                                std::to_string(box.parties()));
  }
  require_no_signaling(box);

  // task 0: Carol has z = 0 and guesses x; task 1: z = 1, guesses y.
  JointDistribution guess_x(2, 2);
  JointDistribution guess_y(2, 2);
  for (std::uint32_t x = 0; x < 2; ++x) {
    for (std::uint32_t y = 0; y < 2; ++y) {
      for (std::uint32_t z = 0; z < 2; ++z) {
        const auto row = box.row((x << 2) | (y << 1) | z);
        for (std::uint32_t o = 0; o < 8; ++o) {
          const std::uint32_t m = bit_at(o, 0, 3) ^ bit_at(o, 1, 3) ^ (x & y) ^ x;
          const std::uint32_t g = bit_at(o, 2, 3) ^ m;
          auto& joint = z == 0 ? guess_x : guess_y;
          joint.at(z == 0 ? x : y, g) += 0.25 * row[o];
        }
      }
    }
  }

  ICGameResult r;
  r.n_database_bits = 2;
  r.n_message_bits = 1;
  r.success_probs = {guess_x.at(0, 0) + guess_x.at(1, 1), guess_y.at(0, 0) + guess_y.at(1, 1)};
  r.i_exact = mutual_information(guess_x) + mutual_information(guess_y);
  r.i_fano = fano_bound(r.success_probs);
  r.violates_ic = std::max(r.i_exact, r.i_fano) > r.n_message_bits;
  return r;
}

namespace {

// Depth-first walk over the joint outcomes of every box in the tree, bottom
// level first. Box j of level L (1 = bottom) pairs the level-(L-1) bits 2j and
// 2j+1; Alice feeds their XOR and keeps (left bit) ^ A as the level-L bit.
class RacWalker {
 public:
  RacWalker(const ConditionalBox& box, int depth, std::uint32_t database, std::uint32_t address)
      : box_(box), depth_(depth), address_(address) {
    const std::size_t bits = std::size_t{1} << depth;
    levels_.resize(static_cast<std::size_t>(depth) + 1);
    levels_[0].resize(bits);
    for (std::size_t i = 0; i < bits; ++i) levels_[0][i] = (database >> i) & 1u;
    for (int l = 1; l <= depth; ++l) levels_[static_cast<std::size_t>(l)].resize(bits >> l);
    bob_.resize(static_cast<std::size_t>(depth) + 1);
  }

  // Accumulates P(guess = g) into out[g].
  void run(double (&out)[2]) { step(1, 0, 1.0, out); }

 private:
  void step(int level, std::size_t j, double weight, double (&out)[2]) {
    if (level > depth_) {
      std::uint32_t g = levels_[static_cast<std::size_t>(depth_)][0];
      for (int l = 1; l <= depth_; ++l) g ^= bob_[static_cast<std::size_t>(l)];
      out[g] += weight;
      return;
    }
    auto& below = levels_[static_cast<std::size_t>(level - 1)];
    auto& here = levels_[static_cast<std::size_t>(level)];
    const std::uint32_t x = below[2 * j] ^ below[2 * j + 1];
    const bool on_path = (address_ >> level) == j;
    const std::uint32_t y = on_path ? (address_ >> (level - 1)) & 1u : 0u;
    const auto row = box_.row((x << 1) | y);

    const bool last_in_level = j + 1 == here.size();
    for (std::uint32_t ab = 0; ab < 4; ++ab) {
      if (row[ab] == 0.0) continue;
      here[j] = below[2 * j] ^ (ab >> 1);
      if (on_path) bob_[static_cast<std::size_t>(level)] = ab & 1u;
      if (last_in_level) {
        step(level + 1, 0, weight * row[ab], out);
      } else {
        step(level, j + 1, weight * row[ab], out);
      }
    }
  }

  const ConditionalBox& box_;
  int depth_;
  std::uint32_t address_;
  std::vector<std::vector<std::uint32_t>> levels_;
  std::vector<std::uint32_t> bob_;
};

}  // namespace

RacEnumeration enumerate_rac(const ConditionalBox& bipartite, int depth) {
  if (bipartite.parties() != 2) throw std::invalid_argument("RAC needs a bipartite box");
  if (depth < 1 || depth > kMaxExactRacDepth) {
    throw std::invalid_argument("exact RAC depth must be in [1, " +
                                std::to_string(kMaxExactRacDepth) + "], got " +
                                std::to_string(depth));
  }
  require_no_signaling(bipartite);

  const std::uint32_t bits = 1u << depth;
  const std::uint64_t databases = std::uint64_t{1} << bits;
  const double prior = 1.0 / static_cast<double>(databases);

  RacEnumeration out;
  out.depth = depth;
  out.joints.assign(bits, JointDistribution(2, 2));
  out.success_by_address.assign(bits, 0.0);

  for (std::uint32_t l = 0; l < bits; ++l) {
    auto& joint = out.joints[l];
    for (std::uint64_t db = 0; db < databases; ++db) {
      double guess[2] = {0.0, 0.0};
      RacWalker(bipartite, depth, static_cast<std::uint32_t>(db), l).run(guess);
      const std::uint32_t a = (db >> l) & 1u;
      joint.at(a, 0) += prior * guess[0];
      joint.at(a, 1) += prior * guess[1];
    }
    out.success_by_address[l] = joint.at(0, 0) + joint.at(1, 1);
  }
  return out;
}

RacLevel concatenated_rac_exact(Bias e, int depth) {
  const auto run = enumerate_rac(make_bipartite_isotropic(e), depth);
  RacLevel r;
  r.depth = depth;
  r.bias = e.value();
  double sum = 0.0;
  for (double p : run.success_by_address) sum += p;
  r.per_bit_success = sum / static_cast<double>(run.success_by_address.size());
  r.i_fano = fano_bound(run.success_by_address);
  for (const auto& j : run.joints) r.i_exact += mutual_information(j);
  return r;
}

RacLevel concatenated_rac_analytic(Bias e, int depth) {
  if (depth < 1) throw std::invalid_argument("RAC depth must be >= 1");
  RacLevel r;
  r.depth = depth;
  r.bias = e.value();
  const double d = std::pow(e.value(), depth);
  r.per_bit_success = (1.0 + d) / 2.0;
  const double database = std::ldexp(1.0, depth);
  r.i_fano = database * bias_capacity(d);
  // Isotropic boxes flip the addressed bit independently of its value, so the
  // channel is binary symmetric and I = 1 - h(p) exactly.
  r.i_exact = r.i_fano;
  return r;
}

std::optional<int> ic_violation_scan(Bias e, int k_max) {
  if (k_max < 1) throw std::invalid_argument("k_max must be >= 1");
  for (int k = 1; k <= k_max; ++k) {
    if (concatenated_rac_analytic(e, k).i_fano > 1.0) return k;
  }
  return std::nullopt;
}

std::vector<ScanRow> ic_threshold_sweep(std::span<const double> grid, int k_max) {
  std::vector<ScanRow> rows;
  rows.reserve(grid.size());
  for (double e : grid) {
    const Bias bias(e);
    ScanRow row;
    row.e = e;
    row.k = ic_violation_scan(bias, k_max);
    const auto level = concatenated_rac_analytic(bias, row.k.value_or(k_max));
    row.p = level.per_bit_success;
    row.i_fano = level.i_fano;
    row.violates = row.k.has_value();
    rows.push_back(row);
  }
  return rows;
}

ICGameResult multipartite_ic(const ConditionalBox& box, int split_k, int depth) {
  if (depth < 1 || depth > kMaxEndToEndDepth) {
    throw std::invalid_argument("depth must be in [1, " + std::to_string(kMaxEndToEndDepth) +
                                "], got " + std::to_string(depth));
  }
  const GroupSplit split(box.parties(), split_k);
  const ConditionalBox bipartite = restrict_inputs(merge_parties(box, split), {0, 0});

  ICGameResult r;
  r.n_database_bits = 1 << depth;
  r.n_message_bits = 1;

  const double e_eff = 2.0 * svetlichny_probability(bipartite) - 1.0;
  bool isotropic = e_eff >= -kProbabilityTolerance && e_eff <= 1.0 + kProbabilityTolerance;
  if (isotropic) {
    const auto reference = make_bipartite_isotropic(Bias(std::clamp(e_eff, 0.0, 1.0)));
    for (std::size_t i = 0; i < reference.table().size() && isotropic; ++i) {
      isotropic = std::abs(reference.table()[i] - bipartite.table()[i]) <= kProbabilityTolerance;
    }
  }

  if (isotropic) {
    const auto level = concatenated_rac_analytic(Bias(std::clamp(e_eff, 0.0, 1.0)), depth);
    r.success_probs.assign(static_cast<std::size_t>(r.n_database_bits), level.per_bit_success);
    r.i_fano = level.i_fano;
    r.i_exact = level.i_exact;
  } else if (depth <= kMaxExactRacDepth) {
    const auto run = enumerate_rac(bipartite, depth);
    r.success_probs = run.success_by_address;
    r.i_fano = fano_bound(r.success_probs);
    for (const auto& j : run.joints) r.i_exact += mutual_information(j);
  } else {
    throw std::invalid_argument("non-isotropic bipartite box: depth must be <= " +
                                std::to_string(kMaxExactRacDepth) + " for exact enumeration");
  }
  r.violates_ic = std::max(r.i_exact, r.i_fano) > r.n_message_bits;
  return r;
}

ICGameResult end_to_end_multipartite_ic(int n_parties, Bias e, int split_k, int depth) {
  return multipartite_ic(make_isotropic(n_parties, e), split_k, depth);
}

}  // namespace nsbox
