#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "pairlat/dense.hpp"

namespace pairlat {

/// Full eigensystem of a real symmetric operator.
///
/// Eigenvalues ascend; column j of `eigenvectors` is the unit eigenvector for
/// eigenvalues[j]. `residual` is max_j ||A v_j - lambda_j v_j||_2 as measured
/// by whoever produced the spectrum.
struct Spectrum {
  std::vector<double> eigenvalues;
  RealMatrix eigenvectors;
  double residual = 0.0;

  std::size_t size() const noexcept { return eigenvalues.size(); }
  double max_abs_eigenvalue() const noexcept;
};

/// Right eigensystem of a general complex matrix.
struct ComplexSpectrum {
  std::vector<Complex> eigenvalues;  // sorted by (real, imag), stable
  ComplexMatrix eigenvectors;        // unit 2-norm columns
  std::vector<double> residuals;     // ||A v - lambda v||_2 per column
  std::vector<bool> flagged;         // residual above contract, or vector not independent (defective)
  double residual = 0.0;             // max of residuals
  double matrix_norm = 0.0;          // Frobenius norm of the input

  bool any_flagged() const;
};

namespace solvers {

/// Relative asymmetry tolerance accepted by sym_eig.
inline constexpr double kSymmetryTolerance = 1e-12;

/// Full eigendecomposition of a dense real symmetric matrix (LAPACK dsyevd).
/// Throws SymmetryError on asymmetric input and ConvergenceError if LAPACK fails.
Spectrum sym_eig(const RealMatrix& a);

/// Same decomposition without the dense O(n^3) residual pass; `residual` is
/// left at zero and the caller is responsible for verifying it (the lattice
/// module does so with a sparse product). Takes the matrix by value because
/// LAPACK overwrites it.
Spectrum sym_eig_unverified(RealMatrix a);

/// Eigenvalues only of a symmetric band matrix with `bandwidth` superdiagonals.
/// `band` holds the upper triangle in LAPACK column-major band storage,
/// band[(bandwidth + i - j) + j * (bandwidth + 1)] = A(i, j) for i <= j.
std::vector<double> sym_band_eigenvalues(std::size_t n, std::size_t bandwidth,
                                         std::vector<double> band);

/// Symmetric tridiagonal eigensolver (implicit-shift QL).
///
/// `diagonal` has n entries and `offdiagonal` n-1. When `want_vectors` is false
/// the returned eigenvector matrix is empty.
Spectrum tridiag_eig(std::span<const double> diagonal, std::span<const double> offdiagonal,
                     bool want_vectors = true);

/// Eigenvalues and right eigenvectors of a general complex matrix, d <= 512.
///
/// Balancing, Householder reduction to Hessenberg form and single-shift QR for
/// the eigenvalues; inverse iteration on the Hessenberg matrix for the vectors.
/// Defective or near-defective eigenvalues still return; their vectors are
/// marked in `flagged`.
ComplexSpectrum complex_eig(const ComplexMatrix& a);

}  // namespace solvers
}  // namespace pairlat
