#include "nsbox/box.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

namespace nsbox {
namespace {

void require_parties(int n) {
  if (n < 2 || n > kMaxParties) {
    throw std::invalid_argument("party count must be in [2, " + std::to_string(kMaxParties) +
                                "], got " + std::to_string(n));
  }
}

void require_inputs(const ConditionalBox& box, BitString inputs) {
  if (inputs.width != box.parties()) {
    throw std::invalid_argument("input string has " + std::to_string(inputs.width) +
                                " bits, box has " + std::to_string(box.parties()) + " parties");
  }
}

double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

std::uint32_t draw(std::span<const double> row, double u) {
  double acc = 0.0;
  std::uint32_t last_nonzero = 0;
  for (std::uint32_t o = 0; o < row.size(); ++o) {
    if (row[o] <= 0.0) continue;
    last_nonzero = o;
    acc += row[o];
    if (u < acc) return o;
  }
  return last_nonzero;
}

}  // namespace

Bias::Bias(double e) : e_(e) {
  if (!(e >= 0.0 && e <= 1.0)) {
    throw std::invalid_argument("bias must lie in [0, 1], got " + std::to_string(e));
  }
}

ConditionalBox ConditionalBox::from_table(int n_parties, std::vector<double> table) {
  require_parties(n_parties);
  const std::size_t side = std::size_t{1} << n_parties;
  if (table.size() != side * side) {
    throw std::invalid_argument("table for " + std::to_string(n_parties) + " parties needs " +
                                std::to_string(side * side) + " entries, got " +
                                std::to_string(table.size()));
  }
  for (double p : table) {
    if (!std::isfinite(p) || p < 0.0 || p > 1.0) {
      throw std::invalid_argument("probability outside [0, 1]: " + std::to_string(p));
    }
  }
  return ConditionalBox(n_parties, std::move(table), false);
}

ConditionalBox make_isotropic(int n_parties, Bias e) {
  require_parties(n_parties);
  const std::uint32_t side = 1u << n_parties;
  const double class_size = static_cast<double>(side / 2);
  const double hit = (1.0 + e.value()) / 2.0 / class_size;
  const double miss = (1.0 - e.value()) / 2.0 / class_size;

  std::vector<double> table(static_cast<std::size_t>(side) * side);
  for (std::uint32_t x = 0; x < side; ++x) {
    const int target = pairwise_parity(x, n_parties);
    for (std::uint32_t o = 0; o < side; ++o) {
      table[static_cast<std::size_t>(x) * side + o] = parity(o) == target ? hit : miss;
    }
  }
  return ConditionalBox::from_table(n_parties, std::move(table));
}

ConditionalBox make_bipartite_isotropic(Bias e) { return make_isotropic(2, e); }

ConditionalBox make_deterministic(int n_parties, std::span<const std::uint32_t> outputs) {
  require_parties(n_parties);
  const std::uint32_t side = 1u << n_parties;
  if (outputs.size() != side) {
    throw std::invalid_argument("strategy must define an output for all " +
                                std::to_string(side) + " input strings, got " +
                                std::to_string(outputs.size()));
  }
  std::vector<double> table(static_cast<std::size_t>(side) * side, 0.0);
  for (std::uint32_t x = 0; x < side; ++x) {
    if (outputs[x] >= side) {
      throw std::invalid_argument("strategy output " + std::to_string(outputs[x]) +
                                  " out of range for " + std::to_string(n_parties) + " parties");
    }
    table[static_cast<std::size_t>(x) * side + outputs[x]] = 1.0;
  }
  return ConditionalBox(n_parties, std::move(table), true);
}

ConditionalBox make_local_deterministic(int n_parties, std::span<const LocalResponse> responses) {
  require_parties(n_parties);
  if (responses.size() != static_cast<std::size_t>(n_parties)) {
    throw std::invalid_argument("need one local response per party");
  }
  const std::uint32_t side = 1u << n_parties;
  std::vector<double> table(static_cast<std::size_t>(side) * side, 0.0);
  for (std::uint32_t x = 0; x < side; ++x) {
    std::uint32_t o = 0;
    for (int i = 0; i < n_parties; ++i) {
      const auto& r = responses[static_cast<std::size_t>(i)];
      const int a = bit_at(x, i, n_parties) ? r.if_one : r.if_zero;
      o = (o << 1) | static_cast<std::uint32_t>(a & 1);
    }
    table[static_cast<std::size_t>(x) * side + o] = 1.0;
  }
  return ConditionalBox::from_table(n_parties, std::move(table));
}

ConditionalBox mixture(std::span<const ConditionalBox> boxes, std::span<const double> weights) {
  if (boxes.empty() || boxes.size() != weights.size()) {
    throw std::invalid_argument("mixture needs matching, non-empty box and weight lists");
  }
  double total = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0)) throw std::invalid_argument("mixture weights must be non-negative");
    total += w;
  }
  if (std::abs(total - 1.0) > kProbabilityTolerance) {
    throw std::invalid_argument("mixture weights must sum to 1");
  }
  const int n = boxes.front().parties();
  std::vector<double> table(boxes.front().table().size(), 0.0);
  for (std::size_t b = 0; b < boxes.size(); ++b) {
    if (boxes[b].parties() != n) {
      throw std::invalid_argument("mixture components have different party counts");
    }
    const auto src = boxes[b].table();
    for (std::size_t i = 0; i < table.size(); ++i) table[i] += weights[b] * src[i];
  }
  for (double& p : table) p = std::clamp(p, 0.0, 1.0);
  return ConditionalBox::from_table(n, std::move(table));
}

NoSignalingReport verify_no_signaling(const ConditionalBox& box, double tol) {
  const int n = box.parties();
  const std::uint32_t side = box.settings();
  NoSignalingReport report;

  for (std::uint32_t x = 0; x < side; ++x) {
    double sum = 0.0;
    for (double p : box.row(x)) sum += p;
    report.max_normalization_error = std::max(report.max_normalization_error, std::abs(sum - 1.0));
  }

  for (int i = 0; i < n; ++i) {
    const std::uint32_t flip = 1u << (n - 1 - i);
    for (std::uint32_t x = 0; x < side; ++x) {
      if (x & flip) continue;
      const auto lo = box.row(x);
      const auto hi = box.row(x | flip);
      for (std::uint32_t o = 0; o < side; ++o) {
        if (o & flip) continue;
        const double m_lo = lo[o] + lo[o | flip];
        const double m_hi = hi[o] + hi[o | flip];
        report.max_marginal_discrepancy =
            std::max(report.max_marginal_discrepancy, std::abs(m_lo - m_hi));
      }
    }
  }

  report.normalized = report.max_normalization_error <= tol;
  report.no_signaling = report.max_marginal_discrepancy <= tol;
  return report;
}

double block_signaling_discrepancy(const ConditionalBox& box, std::uint32_t observed_mask) {
  const std::uint32_t side = box.settings();
  observed_mask &= side - 1;
  double worst = 0.0;
  std::vector<double> reference(side);
  std::vector<double> current(side);
  for (std::uint32_t x = 0; x < side; ++x) {
    const std::uint32_t base = x & observed_mask;
    if (x == base) continue;
    std::fill(reference.begin(), reference.end(), 0.0);
    std::fill(current.begin(), current.end(), 0.0);
    const auto r0 = box.row(base);
    const auto r1 = box.row(x);
    for (std::uint32_t o = 0; o < side; ++o) {
      reference[o & observed_mask] += r0[o];
      current[o & observed_mask] += r1[o];
    }
    for (std::uint32_t o = 0; o < side; ++o) {
      if ((o & observed_mask) != o) continue;
      worst = std::max(worst, std::abs(reference[o] - current[o]));
    }
  }
  return worst;
}

BitString sample(const ConditionalBox& box, BitString inputs, std::uint64_t seed) {
  require_inputs(box, inputs);
  std::mt19937_64 rng(seed);
  return BitString{draw(box.row(inputs.value), uniform01(rng)), box.parties()};
}

std::vector<std::uint32_t> sample_many(const ConditionalBox& box, BitString inputs,
                                       std::uint64_t seed, std::size_t count) {
  require_inputs(box, inputs);
  std::mt19937_64 rng(seed);
  const auto row = box.row(inputs.value);
  std::vector<std::uint32_t> out(count);
  for (auto& o : out) o = draw(row, uniform01(rng));
  return out;
}

std::vector<double> marginal(const ConditionalBox& box, std::span<const int> parties,
                             BitString inputs) {
  require_inputs(box, inputs);
  const int n = box.parties();
  if (parties.empty()) throw std::invalid_argument("marginal needs a non-empty party subset");
  std::uint32_t seen = 0;
  for (int p : parties) {
    if (p < 0 || p >= n) throw std::invalid_argument("party index out of range");
    if (seen & (1u << p)) throw std::invalid_argument("party listed twice in subset");
    seen |= 1u << p;
  }
  const int m = static_cast<int>(parties.size());
  std::vector<double> out(std::size_t{1} << m, 0.0);
  const auto row = box.row(inputs.value);
  for (std::uint32_t o = 0; o < row.size(); ++o) {
    std::uint32_t key = 0;
    for (int p : parties) key = (key << 1) | static_cast<std::uint32_t>(bit_at(o, p, n));
    out[key] += row[o];
  }
  return out;
}

}  // namespace nsbox
