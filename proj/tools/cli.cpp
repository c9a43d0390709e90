#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "nsbox/nsbox.hpp"

namespace nsbox::cli {
namespace {

using Json = nlohmann::ordered_json;

class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

double num(double v) { return round_significant(v); }

std::vector<std::string> split_on(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, sep)) parts.push_back(item);
  if (!text.empty() && text.back() == sep) parts.emplace_back();
  return parts;
}

double parse_real(const std::string& text, const std::string& what) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    throw InputError("cannot parse " + what + " \"" + text + "\"");
  }
  if (used != text.size() || !std::isfinite(v)) {
    throw InputError("cannot parse " + what + " \"" + text + "\"");
  }
  return v;
}

std::vector<double> parse_grid(const std::string& text) {
  std::vector<double> grid;
  for (const auto& item : split_on(text, ',')) grid.push_back(parse_real(item, "grid value"));
  if (grid.empty()) throw InputError("--grid needs at least one value");
  return grid;
}

Json to_json(const NoSignalingReport& r) {
  return Json{{"normalized", r.normalized},
              {"no_signaling", r.no_signaling},
              {"max_marginal_discrepancy", num(r.max_marginal_discrepancy)},
              {"max_normalization_error", num(r.max_normalization_error)}};
}

Json to_json(const SvetlichnyReport& r) {
  return Json{{"n_parties", r.n_parties},
              {"avg_probability", num(r.avg_probability)},
              {"correlator_value", num(r.correlator_value)},
              {"hybrid_correlator_bound", std::ldexp(1.0, r.n_parties - 1)},
              {"violates_hybrid_bound", r.violates_hybrid_bound},
              {"exceeds_quantum", r.exceeds_quantum},
              {"at_algebraic_max", r.at_algebraic_max}};
}

Json to_json(const ICGameResult& r) {
  Json probs = Json::array();
  for (double p : r.success_probs) probs.push_back(num(p));
  return Json{{"n_database_bits", r.n_database_bits},
              {"n_message_bits", r.n_message_bits},
              {"success_probs", std::move(probs)},
              {"i_exact", num(r.i_exact)},
              {"i_fano", num(r.i_fano)},
              {"violates_ic", r.violates_ic}};
}

const char* flag(bool b) { return b ? "true" : "false"; }

// Monte Carlo estimate of the Svetlichny average from `samples` draws per input.
double sampled_svetlichny(const ConditionalBox& box, std::uint64_t seed, std::size_t samples) {
  double acc = 0.0;
  for (std::uint32_t x = 0; x < box.settings(); ++x) {
    const int target = pairwise_parity(x, box.parties());
    const auto draws = sample_many(box, BitString{x, box.parties()}, seed + x, samples);
    std::size_t hits = 0;
    for (auto o : draws) hits += parity(o) == target;
    acc += static_cast<double>(hits) / static_cast<double>(samples);
  }
  return acc / static_cast<double>(box.settings());
}

int cmd_verify(const RunConfig& cfg, std::ostream& out) {
  const auto box = load_box(cfg.box_source);
  const auto report = verify_no_signaling(box, cfg.tolerance);
  if (cfg.format == OutputFormat::kCsv) {
    out << "n_parties,normalized,no_signaling,max_marginal_discrepancy,max_normalization_error\n"
        << box.parties() << ',' << flag(report.normalized) << ',' << flag(report.no_signaling)
        << ',' << format_number(report.max_marginal_discrepancy) << ','
        << format_number(report.max_normalization_error) << '\n';
  } else {
    Json doc{{"command", "verify"}, {"box", cfg.box_source}, {"n_parties", box.parties()}};
    doc.update(to_json(report));
    out << doc.dump(2) << '\n';
  }
  return report.normalized && report.no_signaling ? kOk : kViolation;
}

int cmd_svetlichny(const RunConfig& cfg, std::ostream& out) {
  const auto box = load_box(cfg.box_source);
  const auto report = evaluate(box);
  std::optional<double> sampled;
  if (cfg.samples > 0) sampled = sampled_svetlichny(box, cfg.seed, cfg.samples);

  if (cfg.format == OutputFormat::kCsv) {
    out << "n_parties,avg_probability,correlator_value,violates_hybrid_bound,exceeds_quantum,"
           "at_algebraic_max";
    if (sampled) out << ",sampled_avg_probability";
    out << '\n'
        << report.n_parties << ',' << format_number(report.avg_probability) << ','
        << format_number(report.correlator_value) << ',' << flag(report.violates_hybrid_bound)
        << ',' << flag(report.exceeds_quantum) << ',' << flag(report.at_algebraic_max);
    if (sampled) out << ',' << format_number(*sampled);
    out << '\n';
  } else {
    Json doc{{"command", "svetlichny"}, {"box", cfg.box_source}};
    doc.update(to_json(report));
    if (sampled) {
      doc["sampled_avg_probability"] = num(*sampled);
      doc["samples_per_setting"] = cfg.samples;
      doc["seed"] = cfg.seed;
    }
    out << doc.dump(2) << '\n';
  }
  return kOk;
}

int cmd_icgame(const RunConfig& cfg, std::ostream& out) {
  const auto box = load_box(cfg.box_source);
  ICGameResult result;
  std::string protocol;
  if (cfg.depth) {
    const int k = cfg.split.value_or(box.parties() - 1);
    result = multipartite_ic(box, k, *cfg.depth);
    protocol = "concatenated_rac";
  } else if (box.parties() == 3) {
    result = tripartite_guess_game(box);
    protocol = "tripartite_guess";
  } else {
    throw InputError("icgame on a " + std::to_string(box.parties()) +
                     "-party box needs --depth (the guessing game alone is three-party)");
  }

  if (cfg.format == OutputFormat::kCsv) {
    const auto [lo, hi] = std::minmax_element(result.success_probs.begin(), result.success_probs.end());
    out << "protocol,n_database_bits,n_message_bits,p_min,p_max,i_exact,i_fano,violates_ic\n"
        << protocol << ',' << result.n_database_bits << ',' << result.n_message_bits << ','
        << format_number(*lo) << ',' << format_number(*hi) << ',' << format_number(result.i_exact)
        << ',' << format_number(result.i_fano) << ',' << flag(result.violates_ic) << '\n';
  } else {
    Json doc{{"command", "icgame"}, {"box", cfg.box_source}, {"protocol", protocol}};
    if (cfg.depth) {
      doc["split"] = cfg.split.value_or(box.parties() - 1);
      doc["depth"] = *cfg.depth;
    }
    doc.update(to_json(result));
    out << doc.dump(2) << '\n';
  }
  return kOk;
}

int cmd_merge(const RunConfig& cfg, std::ostream& out) {
  const auto box = load_box(cfg.box_source);
  const GroupSplit split(box.parties(), cfg.split.value_or(box.parties() - 1));
  const auto merged = merge_parties(box, split, cfg.tolerance);
  if (cfg.format == OutputFormat::kCsv) {
    out << "inputs,A,B,probability\n";
    for (std::uint32_t x = 0; x < merged.settings(); ++x) {
      for (int a = 0; a < 2; ++a) {
        for (int b = 0; b < 2; ++b) {
          out << format_bits(x, split.parties()) << ',' << a << ',' << b << ','
              << format_number(merged(x, a, b)) << '\n';
        }
      }
    }
  } else {
    auto doc = Json::parse(merged_to_json(merged));
    doc["parity_success"] = num(merged.parity_success());
    out << doc.dump(2) << '\n';
  }
  return kOk;
}

int cmd_sweep(const RunConfig& cfg, std::ostream& out) {
  if (cfg.grid.empty()) throw InputError("sweep needs --grid");
  if (cfg.k_max < 1) throw InputError("--kmax must be >= 1");
  const auto rows = ic_threshold_sweep(cfg.grid, cfg.k_max);
  if (cfg.format.value_or(OutputFormat::kCsv) == OutputFormat::kCsv) {
    out << scan_csv(rows);
  } else {
    Json list = Json::array();
    for (const auto& r : rows) {
      list.push_back(Json{{"e", num(r.e)},
                          {"k", r.k ? Json(*r.k) : Json(nullptr)},
                          {"p", num(r.p)},
                          {"i_fano", num(r.i_fano)},
                          {"violates", r.violates}});
    }
    out << Json{{"command", "sweep"}, {"k_max", cfg.k_max}, {"rows", std::move(list)}}.dump(2)
        << '\n';
  }
  return kOk;
}

int dispatch(const RunConfig& cfg, std::ostream& out) {
  if (cfg.command == "verify") return cmd_verify(cfg, out);
  if (cfg.command == "svetlichny") return cmd_svetlichny(cfg, out);
  if (cfg.command == "icgame") return cmd_icgame(cfg, out);
  if (cfg.command == "merge") return cmd_merge(cfg, out);
  if (cfg.command == "sweep") return cmd_sweep(cfg, out);
  throw InputError("unknown command \"" + cfg.command + "\"");
}

}  // namespace

ConditionalBox load_box(const std::string& source) {
  if (source.empty()) throw InputError("--box is required");
  constexpr std::string_view kIsotropic = "isotropic:";
  if (source.rfind(kIsotropic, 0) == 0) {
    const auto parts = split_on(source.substr(kIsotropic.size()), ':');
    if (parts.size() != 2) throw InputError("generator spec must look like isotropic:N:e");
    std::size_t used = 0;
    int n = 0;
    try {
      n = std::stoi(parts[0], &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != parts[0].size()) throw InputError("bad party count in " + source);
    return make_isotropic(n, Bias(parse_real(parts[1], "bias")));
  }
  std::ifstream in(source);
  if (!in) throw InputError("cannot open box file " + source);
  std::stringstream buf;
  buf << in.rdbuf();
  return box_from_json(buf.str());
}

int execute(const RunConfig& config, std::ostream& out, std::ostream& err) {
  RunConfig cfg = config;
  if (!cfg.format && cfg.command != "sweep") cfg.format = OutputFormat::kText;
  std::ostringstream buffer;
  int status = kOk;
  try {
    status = dispatch(cfg, buffer);
  } catch (const SignalingError& e) {
    err << "error: " << e.what() << '\n';
    return kViolation;
  } catch (const InputError& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  } catch (const ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  }

  if (cfg.out_path.empty()) {
    out << buffer.str();
  } else {
    std::ofstream file(cfg.out_path, std::ios::binary);
    if (!file) {
      err << "error: cannot write " << cfg.out_path << '\n';
      return kInputError;
    }
    file << buffer.str();
  }
  return status;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Multipartite no-signaling boxes, Svetlichny functionals and information-causality games"};
  app.require_subcommand(1);

  RunConfig cfg;
  std::string grid_text;
  std::string format_text;

  auto add_common = [&](CLI::App* sub, bool needs_box) {
    auto* box = sub->add_option("--box", cfg.box_source, "Box file or generator spec isotropic:N:e");
    if (needs_box) box->required();
    sub->add_option("--tol", cfg.tolerance, "Probability tolerance")->check(CLI::NonNegativeNumber);
    sub->add_option("--seed", cfg.seed, "Seed for sampled estimates");
    sub->add_option("--format", format_text, "Output format")->check(CLI::IsMember({"csv", "text"}));
    sub->add_option("--out", cfg.out_path, "Write output to this file");
  };

  auto* verify = app.add_subcommand("verify", "Check normalization and no-signaling");
  add_common(verify, true);

  auto* svet = app.add_subcommand("svetlichny", "Evaluate the Svetlichny functional in both forms");
  add_common(svet, true);
  svet->add_option("--samples", cfg.samples, "Draws per input for a sampled estimate (0 = off)");

  auto* game = app.add_subcommand("icgame", "Run an information-causality game");
  add_common(game, true);
  game->add_option("--split", cfg.split, "Left block size k for the RAC pipeline (default N-1)");
  game->add_option("--depth", cfg.depth, "Concatenation depth of the random access code");

  auto* merge = app.add_subcommand("merge", "Merge parties into a bipartite box");
  add_common(merge, true);
  merge->add_option("--split", cfg.split, "Left block size k (default N-1)");

  auto* sweep = app.add_subcommand("sweep", "Scan biases for the first IC-violating depth");
  add_common(sweep, false);
  sweep->add_option("--grid", grid_text, "Comma-separated bias values")->required();
  sweep->add_option("--kmax", cfg.k_max, "Deepest concatenation to scan");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kInputError;
  }

  cfg.command = app.get_subcommands().front()->get_name();
  if (!format_text.empty()) {
    cfg.format = format_text == "csv" ? OutputFormat::kCsv : OutputFormat::kText;
  }
  if (!grid_text.empty()) {
    try {
      cfg.grid = parse_grid(grid_text);
    } catch (const InputError& e) {
      err << "error: " << e.what() << '\n';
      return kInputError;
    }
  }
  return execute(cfg, out, err);
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  std::vector<const char*> argv;
  argv.push_back("nsbox");
  for (const auto& a : args) argv.push_back(a.c_str());
  return run(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace nsbox::cli
