#include "nsbox/serialize.hpp"

#include <cstdio>
#include <cstdlib>
#include <sstream>

#include "json.hpp"
#include "nsbox/bits.hpp"

namespace nsbox {

using nlohmann::json;

std::string box_to_json(const ConditionalBox& box, int indent) {
  json table = json::object();
  for (std::uint32_t x = 0; x < box.settings(); ++x) {
    const auto row = box.row(x);
    table[format_bits(x, box.parties())] = std::vector<double>(row.begin(), row.end());
  }
  json doc = {{"n_parties", box.parties()}, {"table", std::move(table)}};
  return doc.dump(indent);
}

ConditionalBox box_from_json(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("box file is not valid JSON: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("n_parties") || !doc.contains("table")) {
    throw ParseError("box file needs \"n_parties\" and \"table\"");
  }
  if (!doc["n_parties"].is_number_integer()) throw ParseError("\"n_parties\" must be an integer");
  const int n = doc["n_parties"].get<int>();
  if (n < 2 || n > kMaxParties) {
    throw ParseError("\"n_parties\" must be in [2, " + std::to_string(kMaxParties) + "]");
  }
  const json& table = doc["table"];
  const std::size_t side = std::size_t{1} << n;
  if (!table.is_object() || table.size() != side) {
    throw ParseError("\"table\" must map all " + std::to_string(side) + " input strings");
  }

  std::vector<double> flat(side * side, 0.0);
  std::vector<bool> seen(side, false);
  for (const auto& [key, row] : table.items()) {
    BitString inputs;
    try {
      inputs = BitString::parse(key);
    } catch (const std::invalid_argument&) {
      throw ParseError("bad input string key \"" + key + "\"");
    }
    if (inputs.width != n) throw ParseError("input key \"" + key + "\" has the wrong length");
    if (seen[inputs.value]) throw ParseError("duplicate input key \"" + key + "\"");
    seen[inputs.value] = true;
    if (!row.is_array() || row.size() != side) {
      throw ParseError("row \"" + key + "\" must hold " + std::to_string(side) + " numbers");
    }
    for (std::size_t o = 0; o < side; ++o) {
      if (!row[o].is_number()) throw ParseError("row \"" + key + "\" has a non-numeric entry");
      flat[inputs.value * side + o] = row[o].get<double>();
    }
  }
  return ConditionalBox::from_table(n, std::move(flat));
}

std::string merged_to_json(const MergedBipartiteBox& merged, int indent) {
  const int n = merged.split().parties();
  json table = json::object();
  for (std::uint32_t x = 0; x < merged.settings(); ++x) {
    const auto row = merged.row(x);
    table[format_bits(x, n)] = std::vector<double>(row.begin(), row.end());
  }
  json doc = {{"n_parties", n},
              {"split", {{"k", merged.split().k()}}},
              {"table", std::move(table)}};
  return doc.dump(indent);
}

std::string format_number(double value) {
  if (value == 0.0) value = 0.0;  // drop the sign of -0
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", value);
  return buf;
}

double round_significant(double value) { return std::strtod(format_number(value).c_str(), nullptr); }

std::string scan_csv(std::span<const ScanRow> rows) {
  std::ostringstream out;
  out << "e,k,p,i_fano,violates\n";
  for (const auto& r : rows) {
    out << format_number(r.e) << ',' << (r.k ? std::to_string(*r.k) : std::string("none")) << ','
        << format_number(r.p) << ',' << format_number(r.i_fano) << ','
        << (r.violates ? "true" : "false") << '\n';
  }
  return out.str();
}

}  // namespace nsbox
