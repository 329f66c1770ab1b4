#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace pairlat::cli {

enum ExitCode : int { kOk = 0, kConfigError = 2, kSolverError = 3 };

/// Everything a subcommand needs. Defaults reproduce the figure parameters.
struct RunConfig {
  std::string command;

  int n = 101;
  double t1 = 1.0;
  std::vector<double> t2;  // empty: per-command default, see default_t2
  double eps1 = 0.0;
  double eps2 = 0.0;
  std::optional<double> u;  // finite-U oracle instead of hard core

  std::vector<double> z;  // real z values; empty: per-command default
  bool z_phase = false;   // sweep z = radius * exp(iK) instead
  double z_radius = 0.5;
  int z_points = 40;
  int cells = 20;

  double t2_min = 0.0;
  double t2_max = 1.0;
  int t2_steps = 11;
  double emin = -4.2;
  double emax = 4.2;

  double sigma = 0.02;
  double cluster_tol = 1e-3;
  double ipr_threshold = 0.3;

  std::optional<double> select_energy;
  double select_window = 0.005;
  bool dump_state = false;

  std::vector<int> n0 = {20, 30, 60};
  int window = 40;
  std::vector<int> com = {22, 23, 24, 25, 26};
  int fit_sep_max = 4;
  int slope_sep_max = 6;
  double ssh_window = 0.02;

  std::filesystem::path out = ".";
  bool svg = false;
  unsigned threads = 1;

  /// Throws InvalidParameter describing the first violated constraint.
  void validate() const;
};

/// t2 values used when --t2 is not given.
std::vector<double> default_t2(const std::string& command);

/// t2 values actually used by `cfg`.
std::vector<double> effective_t2(const RunConfig& cfg);

/// Parses argv. Returns the config, or an exit code when parsing ended the run
/// (help output is kOk, errors kConfigError).
struct ParseResult {
  std::optional<RunConfig> config;
  int exit_code = kOk;
};
ParseResult parse_command_line(int argc, const char* const* argv);

}  // namespace pairlat::cli
