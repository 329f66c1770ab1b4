#pragma once

#include <filesystem>
#include <vector>

#include "cli/config.hpp"
#include "pairlat/dense.hpp"
#include "pairlat/observables.hpp"
#include "pairlat/solvers.hpp"

namespace pairlat::cli {

/// SSH eigenpair compared against the exact relative-motion decay.
struct SshCandidate {
  Complex energy;
  std::vector<double> profile;  // |chi| over A1, B1, A2, ...
  double slope = 0.0;           // d log|chi| / d(site), first slope_sep_max sites
};

/// Bound-state analysis behind `fig6`.
struct BoundState {
  double energy = 0.0;
  double ipr = 0.0;
  std::size_t index = 0;  // eigenstate picked before unmixing
  TwoParticleAmplitude state;
  ZFit fit;
  std::vector<DecayProfile> cuts;

  double exact_slope = 0.0;  // mean over cuts of d log|psi| / dl, l = 1..slope_sep_max
  /// SSH eigenpairs at the fitted z with |E_ssh - energy| <= cfg.ssh_window,
  /// nearest first. Never empty: the nearest eigenpair is always included.
  std::vector<SshCandidate> ssh;
};

/// Selects the most localized eigenstate near cfg.select_energy (default
/// -0.259 t1), unmixes its degenerate partners, cuts it at cfg.com, fits z
/// and compares with the SSH chain of cfg.cells cells.
BoundState analyze_bound_state(const RunConfig& cfg, const Spectrum& spectrum);

/// Least-squares slope of log(values[k]) against k (k = 0 .. count-1).
double log_slope(const std::vector<double>& values, std::size_t count);

/// Runs the configured subcommand and returns the files written.
std::vector<std::filesystem::path> execute(const RunConfig& cfg);

/// Parses, validates and executes; maps failures to exit codes with a
/// diagnostic on standard error.
int run(int argc, const char* const* argv);

}  // namespace pairlat::cli
