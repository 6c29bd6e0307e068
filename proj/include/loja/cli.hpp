#pragma once

#include "loja/report_json.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace loja {

enum ExitCode : int { kExitPass = 0, kExitUsage = 1, kExitCheckFailure = 2 };

/// Fully resolved run settings. Unset optionals take the per-command default.
struct RunConfig {
  std::string command;
  std::string polynomial_text;
  /// Explicit variable order; the rest follow in order of appearance.
  std::vector<std::string> variables;
  std::vector<double> point;
  std::optional<double> sigma;
  double delta = 0.25;
  double tol = 1e-10;
  double t_max = 1e7;
  std::optional<std::size_t> samples;
  std::uint64_t seed = 1;
  unsigned max_depth = 8;
  bool uniform = false;
  std::string output_path;
  std::string format = "json";
  unsigned workers = 1;
  /// "origin", or subspaces separated by ';' each listing coordinate indices
  /// separated by ',' (e.g. "0;1" for the union of both axes of the plane).
  std::string crit = "origin";
  std::optional<std::string> theta;
  std::optional<double> constant;
  std::optional<unsigned> order;
  double r_min = 1e-6;
  double r_max = 1e-1;
  std::size_t radius_count = 26;
  /// A previous report.json with a theta interval, for `estimate`.
  std::string bound_from;
};

struct RunResult {
  int exit_code = kExitPass;
  Json report;
  std::string trajectory_csv;
  std::string envelope_csv;
};

/// Executes one command. Throws ParseError, PreconditionError, DimensionError
/// and std::runtime_error for IO; check failures are reported via exit_code.
RunResult run(const RunConfig& config);

/// The loja-lab entry point: parses argv, runs, writes outputs and maps
/// exceptions to exit codes.
int main_entry(int argc, const char* const* argv, std::istream& in, std::ostream& out, std::ostream& err);

}  // namespace loja
