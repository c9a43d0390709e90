#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "nsbox/box.hpp"

namespace nsbox::cli {

/// Exit statuses shared by every command.
enum ExitStatus : int {
  kOk = 0,
  kViolation = 1,
  kInputError = 2,
};

enum class OutputFormat { kCsv, kText };

struct RunConfig {
  std::string command;     // verify | svetlichny | icgame | merge | sweep
  std::string box_source;  // file path or "isotropic:N:e"
  double tolerance = kProbabilityTolerance;
  std::uint64_t seed = 0;
  std::size_t samples = 0;
  std::optional<int> split;
  std::optional<int> depth;
  int k_max = 25;
  std::vector<double> grid;
  std::optional<OutputFormat> format;
  std::string out_path;
};

/// Builds a box from "isotropic:N:e" or loads it from a box file.
/// Throws ParseError or std::invalid_argument on bad input.
ConditionalBox load_box(const std::string& source);

/// Runs one command. Output goes to `out` unless the config names a file.
int execute(const RunConfig& config, std::ostream& out, std::ostream& err);

/// Parses argv (argv[0] is the program name) and executes.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace nsbox::cli
