#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "pairlat/error.hpp"
#include "pairlat/solvers.hpp"

namespace pairlat::solvers {

Spectrum tridiag_eig(std::span<const double> diagonal, std::span<const double> offdiagonal,
                     bool want_vectors) {
  const std::size_t n = diagonal.size();
  if (n == 0) return {};
  if (offdiagonal.size() + 1 != n) {
    throw InvalidParameter("tridiag_eig: offdiagonal must have n - 1 entries");
  }

  std::vector<double> d(diagonal.begin(), diagonal.end());
  // e[i] couples i and i + 1; e[n - 1] is scratch.
  std::vector<double> e(n, 0.0);
  std::copy(offdiagonal.begin(), offdiagonal.end(), e.begin());

  RealMatrix z = want_vectors ? RealMatrix::identity(n) : RealMatrix{};
  constexpr int kMaxSweeps = 60;
  const double eps = std::numeric_limits<double>::epsilon();

  for (std::size_t l = 0; l < n; ++l) {
    int sweeps = 0;
    std::size_t m;
    do {
      for (m = l; m + 1 < n; ++m) {
        const double dd = std::abs(d[m]) + std::abs(d[m + 1]);
        if (std::abs(e[m]) <= eps * dd) break;
      }
      if (m == l) break;
      if (++sweeps > kMaxSweeps) {
        throw ConvergenceError("tridiag_eig: no convergence", static_cast<std::size_t>(sweeps),
                               std::abs(e[l]));
      }

      // Wilkinson-type shift from the leading 2x2 of the unreduced block.
      double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
      double r = std::hypot(g, 1.0);
      g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
      double s = 1.0, c = 1.0, p = 0.0;
      bool underflow = false;
      for (std::size_t i = m; i-- > l;) {
        double f = s * e[i];
        const double b = c * e[i];
        r = std::hypot(f, g);
        e[i + 1] = r;
        if (r == 0.0) {
          d[i + 1] -= p;
          e[m] = 0.0;
          underflow = true;
          break;
        }
        s = f / r;
        c = g / r;
        g = d[i + 1] - p;
        r = (d[i] - g) * s + 2.0 * c * b;
        p = s * r;
        d[i + 1] = g + p;
        g = c * r - b;
        if (want_vectors) {
          for (std::size_t k = 0; k < n; ++k) {
            f = z(k, i + 1);
            z(k, i + 1) = s * z(k, i) + c * f;
            z(k, i) = c * z(k, i) - s * f;
          }
        }
      }
      if (underflow) continue;
      d[l] -= p;
      e[l] = g;
      e[m] = 0.0;
    } while (m != l);
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return d[a] < d[b]; });

  Spectrum out;
  out.eigenvalues.resize(n);
  for (std::size_t k = 0; k < n; ++k) out.eigenvalues[k] = d[order[k]];
  if (!want_vectors) return out;

  out.eigenvectors = RealMatrix(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    auto src = z.col(order[k]);
    std::copy(src.begin(), src.end(), out.eigenvectors.col(k).begin());
  }

  for (std::size_t k = 0; k < n; ++k) {
    const auto v = out.eigenvectors.col(k);
    const double lambda = out.eigenvalues[k];
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double hv = diagonal[i] * v[i];
      if (i > 0) hv += offdiagonal[i - 1] * v[i - 1];
      if (i + 1 < n) hv += offdiagonal[i] * v[i + 1];
      const double diff = hv - lambda * v[i];
      acc += diff * diff;
    }
    out.residual = std::max(out.residual, std::sqrt(acc));
  }
  return out;
}

}  // namespace pairlat::solvers
