#pragma once

// Effective non-Hermitian SSH chain for the relative motion of the pair at a
// fixed center-of-mass parameter z = exp(iK).

#include <array>
#include <cstddef>
#include <span>
#include <vector>

#include "pairlat/dense.hpp"
#include "pairlat/solvers.hpp"

namespace pairlat {

struct SSHParams {
  double t1 = 1.0;
  double t2 = 0.8;
  Complex z{-0.85, 0.0};
  int n_cells = 20;

  /// Throws InvalidParameter for z = 0, n_cells < 2 or non-finite values.
  void validate() const;
};

struct WindingResult {
  int winding = 0;  // meaningless when gap_closed
  bool gap_closed = false;
  double min_abs_h = 0.0;
};

/// Localization parameter over a (z, t2/t1) grid. Rows follow z, columns t2/t1.
struct LocalizationMap {
  std::vector<Complex> z;
  std::vector<double> ratio;
  RealMatrix value;       // 0 where masked
  Matrix<int> gap_closed; // 1 where the bulk gap closes
};

/// 2N x 2N matrix on (A1, B1, A2, B2, ...). Intra-cell A->B coupling t2 + t1/z,
/// B->A t2 + t1 z; inter-cell A_n->B_{n-1} t1 + t2/z, B_n->A_{n+1} t1 + t2 z.
ComplexMatrix build_ssh_matrix(const SSHParams& p);

/// Both branches +-E(kappa) of the bulk dispersion, principal square root first.
std::array<Complex, 2> bulk_energy(const SSHParams& p, double kappa);

/// h(kappa) = E(kappa)^2, the product of the two off-diagonal Bloch factors.
Complex bulk_h(const SSHParams& p, double kappa);

/// Winding of h(kappa) around zero over kappa in [-pi, pi] sampled at
/// `samples` + 1 points. Gap closure when min |h| < 1e-12 (|t1| + |t2|)^2.
WindingResult winding_number(const SSHParams& p, std::size_t samples = 1024);

/// (t1 z + t2) / (t2 z + t1): per-cell ratio of the A-sublattice skin mode.
/// Throws InvalidParameter when the denominator vanishes.
Complex skin_ratio(const SSHParams& p);

/// Mean over all right eigenvectors (unit 2-norm) of |first A|^2 - |last B|^2.
double localization_parameter(const SSHParams& p);

/// localization_parameter over the grid; gap-closed points are stored as 0
/// and flagged. Grid points are evaluated in parallel on up to `threads` threads.
LocalizationMap localization_map(double t1, std::span<const double> ratios, std::span<const Complex> zs,
                                 int n_cells, unsigned threads = 1);

/// Real z values spanning [-2, -0.05] and [0.05, 2] with `per_side` points on each side.
std::vector<Complex> default_z_grid(std::size_t per_side);

}  // namespace pairlat
