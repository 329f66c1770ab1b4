#include <cblas.h>
#include <lapacke.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <utility>

#include "pairlat/error.hpp"
#include "pairlat/solvers.hpp"

namespace pairlat {

double Spectrum::max_abs_eigenvalue() const noexcept {
  double m = 0.0;
  for (double e : eigenvalues) m = std::max(m, std::abs(e));
  return m;
}

namespace solvers {
namespace {

void require_symmetric(const RealMatrix& a) {
  if (a.rows() != a.cols()) throw SymmetryError("sym_eig: matrix is not square");
  const std::size_t n = a.rows();
  double scale = 0.0;
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t i = 0; i < n; ++i) scale = std::max(scale, std::abs(a(i, j)));
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = j + 1; i < n; ++i) {
      if (std::abs(a(i, j) - a(j, i)) > kSymmetryTolerance * scale) {
        throw SymmetryError("sym_eig: asymmetric entry at (" + std::to_string(i) + ", " +
                            std::to_string(j) + ")");
      }
    }
  }
}

// max_j ||A v_j - lambda_j v_j||_2 using one dgemm.
double dense_residual(const RealMatrix& a, const Spectrum& s) {
  const std::size_t n = a.rows();
  if (n == 0) return 0.0;
  RealMatrix av(n, n);
  const auto ni = static_cast<int>(n);
  cblas_dgemm(CblasColMajor, CblasNoTrans, CblasNoTrans, ni, ni, ni, 1.0, a.data(), ni,
              s.eigenvectors.data(), ni, 0.0, av.data(), ni);
  double worst = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double d = av(i, j) - s.eigenvalues[j] * s.eigenvectors(i, j);
      acc += d * d;
    }
    worst = std::max(worst, std::sqrt(acc));
  }
  return worst;
}

}  // namespace

Spectrum sym_eig_unverified(RealMatrix a) {
  require_symmetric(a);
  const std::size_t n = a.rows();
  Spectrum s;
  s.eigenvalues.resize(n);
  s.eigenvectors = std::move(a);
  if (n == 0) return s;

  const int info = LAPACKE_dsyevd(LAPACK_COL_MAJOR, 'V', 'U', static_cast<int>(n),
                                  s.eigenvectors.data(), static_cast<int>(n), s.eigenvalues.data());
  if (info != 0) {
    throw ConvergenceError("sym_eig: dsyevd failed with info = " + std::to_string(info),
                           static_cast<std::size_t>(std::max(info, 0)), std::numeric_limits<double>::quiet_NaN());
  }
  return s;
}

Spectrum sym_eig(const RealMatrix& a) {
  Spectrum s = sym_eig_unverified(a);
  s.residual = dense_residual(a, s);
  const double bound = 1e-9 * std::max(s.max_abs_eigenvalue(), 1e-300);
  if (!(s.residual <= bound) && s.max_abs_eigenvalue() > 0.0) {
    throw ConvergenceError("sym_eig: residual " + std::to_string(s.residual) +
                               " exceeds 1e-9 * max|lambda|",
                           0, s.residual);
  }
  return s;
}

std::vector<double> sym_band_eigenvalues(std::size_t n, std::size_t bandwidth,
                                         std::vector<double> band) {
  if (band.size() != (bandwidth + 1) * n) {
    throw InvalidParameter("sym_band_eigenvalues: band storage has the wrong size");
  }
  std::vector<double> w(n);
  if (n == 0) return w;
  const int info = LAPACKE_dsbev(LAPACK_COL_MAJOR, 'N', 'U', static_cast<int>(n),
                                 static_cast<int>(bandwidth), band.data(),
                                 static_cast<int>(bandwidth + 1), w.data(), nullptr, 1);
  if (info != 0) {
    throw ConvergenceError("sym_band_eigenvalues: dsbev failed with info = " + std::to_string(info),
                           static_cast<std::size_t>(std::max(info, 0)), std::numeric_limits<double>::quiet_NaN());
  }
  return w;
}

}  // namespace solvers
}  // namespace pairlat
