#pragma once

#include <span>
#include <stdexcept>
#include <string>
#include <string_view>

#include "nsbox/box.hpp"
#include "nsbox/icgame.hpp"
#include "nsbox/wiring.hpp"

namespace nsbox {

class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Box file format (JSON):
//   {"n_parties": N,
//    "table": {"<N-bit input string>": [2^N probabilities, lexicographic output order], ...}}
// Party 1 is the leftmost character of every bit string. Merged boxes add
// "split": {"k": k} and carry 4 entries per input (AB = 00, 01, 10, 11).

std::string box_to_json(const ConditionalBox& box, int indent = 2);

/// Throws ParseError on malformed JSON or a table of the wrong shape, and
/// std::invalid_argument when an entry lies outside [0, 1].
ConditionalBox box_from_json(std::string_view text);

std::string merged_to_json(const MergedBipartiteBox& merged, int indent = 2);

/// `%.12g` formatting used by every CSV and text emitter.
std::string format_number(double value);

/// Rounds to 12 significant digits so structured output matches the CSV text.
double round_significant(double value);

/// Header `e,k,p,i_fano,violates`; k is "none" when no violating depth was found.
std::string scan_csv(std::span<const ScanRow> rows);

}  // namespace nsbox
