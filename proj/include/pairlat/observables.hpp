#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "pairlat/dense.hpp"
#include "pairlat/lattice.hpp"
#include "pairlat/solvers.hpp"

namespace pairlat {

/// Uniform energy grid, both ends included.
struct EnergyGrid {
  double emin = -3.0;
  double emax = 3.0;
  std::size_t points = 301;

  double step() const noexcept { return points > 1 ? (emax - emin) / static_cast<double>(points - 1) : 0.0; }
  double at(std::size_t i) const noexcept { return emin + step() * static_cast<double>(i); }
};

/// Gaussian-broadened density of states; each state contributes unit weight.
struct DosCurve {
  std::vector<double> energy;
  std::vector<double> density;
  double sigma = 0.0;
  std::size_t state_count = 0;

  /// Trapezoid integral of density over the grid.
  double integral() const;
};

/// A run of (almost) degenerate levels in a sorted spectrum.
struct DegeneracyCluster {
  std::size_t first = 0;  // index of the lowest member
  std::size_t count = 0;
  double mean = 0.0;
  double spread = 0.0;  // highest minus lowest member

  std::size_t size() const noexcept { return count; }
  std::vector<std::size_t> members() const;
};

/// |psi| along one zigzag cut of fixed center of mass.
struct DecayProfile {
  int com = 0;
  std::vector<int> separation;
  std::vector<double> amplitude;
};

/// Region of (center of mass c, separation l) used by fit_z.
struct FitWindow {
  int com_min = 22;
  int com_max = 26;
  int sep_min = 1;
  int sep_max = 4;
};

struct ZFit {
  Complex z;
  double magnitude = 0.0;
  double sign = 1.0;  // +1 or -1
  double slope_spread = 0.0;  // max minus min of the per-separation log|z| estimates
  std::size_t samples = 0;
};

inline constexpr double kDefaultSigma = 0.02;
inline constexpr double kDefaultClusterTol = 1e-3;
inline constexpr double kSpacingFloor = 1e-12;
inline constexpr double kDefaultIprThreshold = 0.3;

/// sum |psi|^4 / (sum |psi|^2)^2. Throws InvalidParameter on a zero vector.
double ipr(std::span<const double> psi);
double ipr(const TwoParticleAmplitude& psi);
/// IPR of every eigenvector column.
std::vector<double> ipr_all(const Spectrum& s);

/// Grid covering the spectrum with a 5 sigma margin and spacing sigma.
EnergyGrid default_dos_grid(std::span<const double> energies, double sigma);

/// Sum of normalized Gaussians of width sigma centered on each energy.
DosCurve dos(std::span<const double> energies, const EnergyGrid& grid, double sigma);

/// DOS of the states whose IPR exceeds `threshold`; may be identically zero.
DosCurve filtered_dos(std::span<const double> energies, std::span<const double> iprs, double threshold,
                      const EnergyGrid& grid, double sigma);

/// 1 / max(nearest-neighbor spacing, floor). Throws InvalidParameter if the
/// input is unsorted or has fewer than three levels.
std::vector<double> level_spacing_weight(std::span<const double> energies, double floor = kSpacingFloor);

/// Partition of a sorted spectrum into maximal runs with consecutive gaps < tol,
/// singletons included.
std::vector<DegeneracyCluster> level_runs(std::span<const double> energies, double tol);

/// The runs of level_runs with at least two members.
std::vector<DegeneracyCluster> degeneracy_clusters(std::span<const double> energies, double tol);

/// Largest cluster whose mean lies within `window` of `target`; ties go to the
/// one nearer the target. Throws DetectionError if none qualifies.
DegeneracyCluster find_flat_band(std::span<const double> energies, double target, double window,
                                 double tol = kDefaultClusterTol);

/// Zigzag cut through psi at center-of-mass label c: separation l = m - n
/// runs upward from 1 and n + m = 2c + (l mod 2), so the cut alternates
/// between the diagonals n + m = 2c and 2c + 1. Throws InvalidParameter for
/// labels outside 1..N-1.
std::vector<DecayProfile> relative_cuts(const TwoParticleAmplitude& psi, std::span<const int> com_positions);

/// Center-of-mass decay parameter z, defined by psi(c + 1, l) = z psi(c, l)
/// in the (c, l) labels of relative_cuts. |z| comes from a least-squares fit
/// of log|psi| against c at each l in the window, averaged over l; the sign
/// is the majority sign of the ratios psi(c + 1, l) / psi(c, l).
/// Throws FitError when the window has fewer than two centers or an
/// amplitude below 1e-12.
ZFit fit_z(const TwoParticleAmplitude& psi, const FitWindow& window);

/// max_i |E_i + E_{M+1-i}| for a sorted spectrum.
double spectral_symmetry_defect(std::span<const double> energies);

/// Index of the highest-IPR state with |E - target| <= window. Throws
/// DetectionError if the window is empty.
std::size_t most_localized_state(std::span<const double> energies, std::span<const double> iprs,
                                 double target, double window);

/// Degenerate partners of state `index` (|E_j - E_index| < tol) mix freely in
/// the eigensolver. This rotates the subspace to the eigenbasis of the
/// center-of-mass coordinate n + m and returns the rotated state with the
/// largest IPR.
TwoParticleAmplitude localize_in_degenerate_subspace(const Spectrum& s, int n_sites, std::size_t index,
                                                     double tol = 1e-7);

}  // namespace pairlat
