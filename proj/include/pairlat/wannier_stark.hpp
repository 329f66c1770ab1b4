#pragma once

// Column picture of the hard-core pair: with the heavy particle fixed at site
// n the light one lives on an open chain of height h = n - 1. Hopping of the
// heavy particle couples neighboring columns, which near a resonance k = pi/3
// maps onto a Wannier-Stark ladder with a weak quadratic correction.

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "pairlat/solvers.hpp"

namespace pairlat {

/// Standing wave j of the open chain of height h.
struct ColumnState {
  int height = 0;
  int mode = 0;
  double k = 0.0;       // pi j / (h + 1)
  double energy = 0.0;  // 2 t1 cos k
  std::vector<double> amplitude;
};

struct ColumnCoupling {
  std::optional<double> analytic;  // empty at resonance or for h = 1
  double direct = 0.0;
  bool resonant = false;
};

struct StarkParams {
  int n0 = 30;
  double field = 0.0;      // F
  double quadratic = 0.0;  // alpha
  double tau = 0.0;
};

/// Symmetric tridiagonal matrix in diagonal / off-diagonal form.
struct Tridiagonal {
  std::vector<double> diagonal;
  std::vector<double> offdiagonal;
};

struct StarkTarget {
  double eigenvalue = 0.0;
  double center_weight = 0.0;
  std::size_t index = 0;
};

struct FlatbandEnergy {
  double epsilon = 0.0;  // 2 alpha tau^2 / F^2 in units of t1
  double energy = 0.0;   // t1 (1 + epsilon)
  double rounded = 0.0;  // -0.98 (t2 / t1)^2
  double simple = 0.0;   // t1 - t2^2 / t1
};

struct PerturbationFit {
  double k = 0.0;
  double e0 = 0.0;  // 2 t1 cos k
  double nu = 0.0;
  double residual = 0.0;  // rms deviation of the cluster means from the parabola
  std::vector<double> cluster_means;
  std::vector<std::size_t> cluster_sizes;
};

/// Resonant wavevectors of the flat-band parabolas, top to bottom in energy.
inline constexpr std::array<double, 6> kResonantK = {
    0.78539816339744830962,  // pi/4
    1.04719755119659774615,  // pi/3
    1.17809724509617246442,  // 3pi/8
    1.25663706143591729539,  // 2pi/5
    1.34639685153848281648,  // 3pi/7
    1.39626340159546366155,  // 4pi/9
};

/// sqrt(2/(h+1)) sin(pi j m/(h+1)), m = 1..h. Throws InvalidParameter unless 1 <= j <= h.
ColumnState standing_wave(int h, int j, double t1 = 1.0);

/// Coupling of mode j of column h to mode jp of column h + 1 through t2,
/// from the closed-form large-column estimate and from the exact overlap sum.
/// The estimate is suppressed when |cos k - cos k'| < 1e-9.
ColumnCoupling column_coupling(int h, int j, int jp, double t2, double t1 = 1.0);

/// F = pi/(sqrt(3) n0), alpha = -pi(6 sqrt(3) + pi)/(18 n0^2), tau = 3 sqrt(3) t2/(2 pi t1).
StarkParams stark_params(int n0, double t1, double t2);

/// (2W+1)-dimensional ladder with diagonal F d + alpha d^2, d = -W..W, and
/// off-diagonal tau. Throws InvalidParameter for W < 10.
Tridiagonal stark_matrix(const StarkParams& p, int window);

/// Eigenvalue whose eigenvector has the largest weight on the window center d = 0.
StarkTarget stark_target(const StarkParams& p, int window = 40);

/// Flat-band energy predicted by the ladder; independent of n0.
FlatbandEnergy flatband_energy(double t1, double t2);

/// J_n(x) by downward recurrence, power series for |x| < 1.
/// Throws InvalidParameter for |x| > 50 or |n| > 200.
double bessel_j(int n, double x);

/// J_0(x) .. J_nmax(x) from a single downward recurrence (|x| <= 50, nmax >= 0).
std::vector<double> bessel_j_sequence(int nmax, double x);

/// sum over all integers n of n^2 J_n(x)^2; equals x^2/2. Throws for |x| > 40.
double appendix_sum(double x);

/// sum over all integers n of J_n(x)^2; equals 1.
double bessel_norm_sum(double x);

/// max_n |F n psi_n + tau (psi_{n+1} + psi_{n-1})| for psi_n = J_n(-2 tau/F), |n| <= nmax.
double ladder_recurrence_residual(double field, double tau, int nmax);

/// Locates the flat-band cluster near 2 t1 cos k in each spectrum (largest
/// cluster within 3 t2^2/t1 + tol) and fits E = 2 t1 cos k - nu t2^2/t1 by
/// least squares. `spectra[i]` is the sorted spectrum at t2_values[i].
/// Throws DetectionError when a cluster is missing.
PerturbationFit perturbation_coefficient(double k, std::span<const double> t2_values,
                                         std::span<const std::vector<double>> spectra, double t1 = 1.0,
                                         double tol = 1e-3);

}  // namespace pairlat
