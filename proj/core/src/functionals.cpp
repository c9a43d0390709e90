#include "nsbox/functionals.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace nsbox {

int sign_v(BitString inputs) {
  const long k = inputs.popcount();
  return ((k * (k - 1) / 2) % 2 == 0) ? 1 : -1;
}

int sign_v_parity(BitString inputs) {
  return pairwise_parity(inputs.value, inputs.width) == 0 ? 1 : -1;
}

std::vector<SignedSetting> signed_settings(int n_parties) {
  std::vector<SignedSetting> out;
  out.reserve(std::size_t{1} << n_parties);
  for (std::uint32_t x = 0; x < (1u << n_parties); ++x) {
    BitString s{x, n_parties};
    out.push_back({s, sign_v(s)});
  }
  return out;
}

double correlator(const ConditionalBox& box, BitString inputs) {
  if (inputs.width != box.parties()) {
    throw std::invalid_argument("input string has " + std::to_string(inputs.width) +
                                " bits, box has " + std::to_string(box.parties()) + " parties");
  }
  double acc = 0.0;
  const auto row = box.row(inputs.value);
  for (std::uint32_t o = 0; o < row.size(); ++o) acc += parity(o) ? -row[o] : row[o];
  return acc;
}

double parity_success(const ConditionalBox& box, std::uint32_t inputs) {
  const int target = pairwise_parity(inputs, box.parties());
  double acc = 0.0;
  const auto row = box.row(inputs);
  for (std::uint32_t o = 0; o < row.size(); ++o) {
    if (parity(o) == target) acc += row[o];
  }
  return acc;
}

double svetlichny_probability(const ConditionalBox& box) {
  double acc = 0.0;
  for (std::uint32_t x = 0; x < box.settings(); ++x) acc += parity_success(box, x);
  return acc / static_cast<double>(box.settings());
}

double svetlichny_correlator(const ConditionalBox& box) {
  double acc = 0.0;
  for (const auto& s : signed_settings(box.parties())) acc += s.sign * correlator(box, s.inputs);
  return std::abs(acc);
}

SvetlichnyReport evaluate(const ConditionalBox& box) {
  SvetlichnyReport r;
  r.n_parties = box.parties();
  r.avg_probability = svetlichny_probability(box);
  r.correlator_value = svetlichny_correlator(box);

  const double scale = static_cast<double>(box.settings());
  const double via_identity = std::abs(2.0 * scale * r.avg_probability - scale);
  if (std::abs(r.correlator_value - via_identity) > 1e-9) {
    throw std::logic_error("correlator and probability forms disagree: " +
                           std::to_string(r.correlator_value) + " vs " +
                           std::to_string(via_identity));
  }

  r.violates_hybrid_bound = r.avg_probability > kHybridBound + kStrictMargin;
  r.exceeds_quantum = r.avg_probability > kQuantumSuccess + kStrictMargin;
  r.at_algebraic_max = std::abs(r.avg_probability - 1.0) <= kAlgebraicBand;
  return r;
}

namespace {

struct Group {
  std::vector<int> parties;  // 0-based, ascending

  int size() const { return static_cast<int>(parties.size()); }

  std::uint32_t gather(std::uint32_t x, int n) const {
    std::uint32_t v = 0;
    for (int p : parties) v = (v << 1) | static_cast<std::uint32_t>(bit_at(x, p, n));
    return v;
  }

  std::uint32_t scatter(std::uint32_t local, int n) const {
    std::uint32_t v = 0;
    const int g = size();
    for (int j = 0; j < g; ++j) {
      if (bit_at(local, j, g)) v |= 1u << (n - 1 - parties[static_cast<std::size_t>(j)]);
    }
    return v;
  }
};

Group group_of(std::uint32_t mask, int n) {
  Group g;
  for (int p = 0; p < n; ++p) {
    if (bit_at(mask, p, n)) g.parties.push_back(p);
  }
  return g;
}

// Strategy tables for one group. kExhaustive: every map from 2^g local inputs to
// 2^g local outputs. kParityReduced: every Boolean function, emitted on the
// group's first party.
std::vector<std::vector<std::uint32_t>> group_strategies(const Group& g, HybridSearch search) {
  const std::uint32_t domain = 1u << g.size();
  const std::uint32_t range = search == HybridSearch::kExhaustive ? domain : 2u;
  const std::uint32_t lead = search == HybridSearch::kExhaustive ? 1u : domain / 2;

  std::uint64_t total = 1;
  for (std::uint32_t i = 0; i < domain; ++i) total *= range;

  std::vector<std::vector<std::uint32_t>> out;
  out.reserve(total);
  std::vector<std::uint32_t> digits(domain, 0);
  for (std::uint64_t s = 0; s < total; ++s) {
    std::vector<std::uint32_t> table(domain);
    for (std::uint32_t i = 0; i < domain; ++i) table[i] = digits[i] * lead;
    out.push_back(std::move(table));
    for (std::uint32_t i = domain; i-- > 0;) {
      if (++digits[i] < range) break;
      digits[i] = 0;
    }
  }
  return out;
}

}  // namespace

HybridBoundResult hybrid_local_bound(int n_parties, HybridSearch search) {
  const int max_n = search == HybridSearch::kExhaustive ? 3 : 4;
  if (n_parties < 2 || n_parties > max_n) {
    throw std::invalid_argument("hybrid_local_bound supports 2.." + std::to_string(max_n) +
                                " parties for this search mode, got " +
                                std::to_string(n_parties));
  }
  const int n = n_parties;
  const std::uint32_t side = 1u << n;
  const std::uint32_t full = side - 1;
  const std::uint32_t first_party = 1u << (n - 1);

  std::vector<int> target(side);
  for (std::uint32_t x = 0; x < side; ++x) target[x] = pairwise_parity(x, n);

  HybridBoundResult best;
  std::uint32_t best_hits = 0;
  bool have_best = false;

  // Each unordered bipartition is visited once: the left block holds party 1.
  for (std::uint32_t left = first_party; left < full; ++left) {
    if (!(left & first_party)) continue;
    const Group lg = group_of(left, n);
    const Group rg = group_of(full & ~left, n);
    const auto left_strats = group_strategies(lg, search);
    const auto right_strats = group_strategies(rg, search);

    std::vector<std::uint32_t> lx(side), rx(side);
    for (std::uint32_t x = 0; x < side; ++x) {
      lx[x] = lg.gather(x, n);
      rx[x] = rg.gather(x, n);
    }

    for (const auto& fl : left_strats) {
      for (const auto& fr : right_strats) {
        ++best.strategies_explored;
        std::uint32_t hits = 0;
        for (std::uint32_t x = 0; x < side; ++x) {
          const std::uint32_t o = lg.scatter(fl[lx[x]], n) | rg.scatter(fr[rx[x]], n);
          if (parity(o) == target[x]) ++hits;
        }
        if (!have_best || hits > best_hits) {
          have_best = true;
          best_hits = hits;
          best.left_mask = left;
          best.witness.resize(side);
          for (std::uint32_t x = 0; x < side; ++x) {
            best.witness[x] = lg.scatter(fl[lx[x]], n) | rg.scatter(fr[rx[x]], n);
          }
        }
      }
    }
  }
  best.value = static_cast<double>(best_hits) / static_cast<double>(side);
  return best;
}

}  // namespace nsbox
