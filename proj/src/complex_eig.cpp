// Dense complex eigensolver for the small non-Hermitian matrices of the
// effective chain models. Pipeline: diagonal balancing, Householder reduction
// to upper Hessenberg form, single-shift QR on the active block for the
// eigenvalues, then inverse iteration on the Hessenberg matrix for each right
// eigenvector, mapped back through the Householder and balancing transforms.

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "pairlat/error.hpp"
#include "pairlat/solvers.hpp"

namespace pairlat {

bool ComplexSpectrum::any_flagged() const {
  return std::any_of(flagged.begin(), flagged.end(), [](bool f) { return f; });
}

namespace solvers {
namespace {

constexpr std::size_t kMaxDimension = 512;
constexpr double kUlp = std::numeric_limits<double>::epsilon();

double abs1(Complex z) { return std::abs(z.real()) + std::abs(z.imag()); }

// Scale rows and columns by powers of two so that off-diagonal row and column
// norms are comparable. Returns the scaling D with A_bal = D^{-1} A D.
std::vector<double> balance(ComplexMatrix& a) {
  const std::size_t n = a.rows();
  std::vector<double> scale(n, 1.0);
  constexpr double kRadix = 2.0;
  bool changed = true;
  for (int pass = 0; changed && pass < 200; ++pass) {
    changed = false;
    for (std::size_t i = 0; i < n; ++i) {
      double c = 0.0, r = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        if (j == i) continue;
        c += abs1(a(j, i));
        r += abs1(a(i, j));
      }
      if (c == 0.0 || r == 0.0) continue;
      double g = r / kRadix;
      double f = 1.0;
      const double s = c + r;
      while (c < g) {
        f *= kRadix;
        c *= kRadix * kRadix;
      }
      g = r * kRadix;
      while (c >= g) {
        f /= kRadix;
        c /= kRadix * kRadix;
      }
      if ((c + r) / f < 0.95 * s) {
        changed = true;
        scale[i] *= f;
        for (std::size_t j = 0; j < n; ++j) a(i, j) /= f;
        for (std::size_t j = 0; j < n; ++j) a(j, i) *= f;
      }
    }
  }
  return scale;
}

// In-place reduction to upper Hessenberg form; returns the unitary Q with A = Q H Q^H.
ComplexMatrix hessenberg(ComplexMatrix& a) {
  const std::size_t n = a.rows();
  ComplexMatrix q = ComplexMatrix::identity(n);
  std::vector<Complex> v(n);
  for (std::size_t k = 0; k + 2 < n; ++k) {
    double xnorm = 0.0;
    for (std::size_t i = k + 1; i < n; ++i) xnorm += std::norm(a(i, k));
    xnorm = std::sqrt(xnorm);
    if (xnorm == 0.0) continue;

    const Complex x0 = a(k + 1, k);
    const Complex phase = std::abs(x0) > 0.0 ? x0 / std::abs(x0) : Complex{1.0, 0.0};
    const Complex alpha = -phase * xnorm;
    std::fill(v.begin(), v.end(), Complex{});
    for (std::size_t i = k + 1; i < n; ++i) v[i] = a(i, k);
    v[k + 1] -= alpha;
    double vnorm = 0.0;
    for (std::size_t i = k + 1; i < n; ++i) vnorm += std::norm(v[i]);
    vnorm = std::sqrt(vnorm);
    if (vnorm == 0.0) continue;
    for (std::size_t i = k + 1; i < n; ++i) v[i] /= vnorm;

    // A <- (I - 2 v v^H) A
    for (std::size_t j = k; j < n; ++j) {
      Complex dot{};
      for (std::size_t i = k + 1; i < n; ++i) dot += std::conj(v[i]) * a(i, j);
      dot *= 2.0;
      for (std::size_t i = k + 1; i < n; ++i) a(i, j) -= v[i] * dot;
    }
    // A <- A (I - 2 v v^H), Q <- Q (I - 2 v v^H)
    for (std::size_t i = 0; i < n; ++i) {
      Complex dot{}, qdot{};
      for (std::size_t j = k + 1; j < n; ++j) {
        dot += a(i, j) * v[j];
        qdot += q(i, j) * v[j];
      }
      dot *= 2.0;
      qdot *= 2.0;
      for (std::size_t j = k + 1; j < n; ++j) {
        a(i, j) -= dot * std::conj(v[j]);
        q(i, j) -= qdot * std::conj(v[j]);
      }
    }
    a(k + 1, k) = alpha;
    for (std::size_t i = k + 2; i < n; ++i) a(i, k) = Complex{};
  }
  return q;
}

struct Givens {
  double c;
  Complex s;
};

// Rotation G = [[c, s], [-conj(s), c]] with G [a; b] = [r; 0].
Givens make_givens(Complex a, Complex b) {
  if (b == Complex{}) return {1.0, Complex{}};
  if (a == Complex{}) return {0.0, Complex{1.0, 0.0}};
  const double abs_a = std::abs(a);
  const double r = std::hypot(abs_a, std::abs(b));
  return {abs_a / r, (a / abs_a) * std::conj(b) / r};
}

// Eigenvalue of [[a, b], [c, d]] closest to d.
Complex wilkinson_shift(Complex a, Complex b, Complex c, Complex d) {
  const Complex tr_half = 0.5 * (a + d);
  const Complex det = a * d - b * c;
  const Complex disc = std::sqrt(tr_half * tr_half - det);
  const Complex l1 = tr_half + disc;
  const Complex l2 = tr_half - disc;
  return std::abs(l1 - d) < std::abs(l2 - d) ? l1 : l2;
}

// Eigenvalues of an upper Hessenberg matrix. Works on a copy and only touches
// the active diagonal block, which is all the eigenvalues depend on.
std::vector<Complex> hessenberg_eigenvalues(ComplexMatrix h, std::size_t& iterations) {
  const std::size_t n = h.rows();
  std::vector<Complex> w(n);
  const std::size_t max_iterations = 30 * std::max<std::size_t>(n, 10);
  std::vector<Givens> rot(n);
  iterations = 0;

  double hnorm = 0.0;
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t i = 0; i < n; ++i) hnorm = std::max(hnorm, abs1(h(i, j)));
  const double small = std::max(hnorm, 1.0) * std::numeric_limits<double>::min() / kUlp;

  std::size_t hi = n;  // active block is [lo, hi)
  std::size_t since_deflation = 0;
  while (hi > 0) {
    // Find the start of the unreduced block ending at hi - 1.
    std::size_t lo = hi - 1;
    while (lo > 0) {
      const double sub = abs1(h(lo, lo - 1));
      double ref = abs1(h(lo, lo)) + abs1(h(lo - 1, lo - 1));
      if (ref == 0.0) ref = hnorm;
      if (sub <= kUlp * ref || sub <= small) {
        h(lo, lo - 1) = Complex{};
        break;
      }
      --lo;
    }
    if (lo == hi - 1) {
      w[hi - 1] = h(hi - 1, hi - 1);
      --hi;
      since_deflation = 0;
      continue;
    }
    if (++iterations > max_iterations) {
      throw ConvergenceError("complex_eig: QR iteration did not converge", iterations,
                             abs1(h(hi - 1, hi - 2)));
    }
    ++since_deflation;

    const std::size_t last = hi - 1;
    Complex mu;
    if (since_deflation % 11 == 0) {
      // Exceptional shift to break cycles.
      mu = h(last, last) + 0.75 * abs1(h(last, last - 1));
    } else {
      mu = wilkinson_shift(h(last - 1, last - 1), h(last - 1, last), h(last, last - 1),
                           h(last, last));
    }

    for (std::size_t k = lo; k < hi; ++k) h(k, k) -= mu;
    for (std::size_t k = lo; k + 1 < hi; ++k) {
      const Givens g = make_givens(h(k, k), h(k + 1, k));
      rot[k] = g;
      for (std::size_t j = k; j < hi; ++j) {
        const Complex x = h(k, j), y = h(k + 1, j);
        h(k, j) = g.c * x + g.s * y;
        h(k + 1, j) = -std::conj(g.s) * x + g.c * y;
      }
      h(k + 1, k) = Complex{};
    }
    for (std::size_t k = lo; k + 1 < hi; ++k) {
      const Givens g = rot[k];
      const std::size_t row_end = std::min(k + 2, hi - 1);
      for (std::size_t i = lo; i <= row_end; ++i) {
        const Complex x = h(i, k), y = h(i, k + 1);
        h(i, k) = x * g.c + y * std::conj(g.s);
        h(i, k + 1) = -x * g.s + y * g.c;
      }
    }
    for (std::size_t k = lo; k < hi; ++k) h(k, k) += mu;
  }
  return w;
}

// Solve (H - lambda I) y = x for upper Hessenberg H by LU with row pivoting.
// Zero pivots are replaced by `tiny`, as in classical inverse iteration.
std::vector<Complex> hessenberg_solve(const ComplexMatrix& h, Complex lambda,
                                      std::vector<Complex> x, double tiny) {
  const std::size_t n = h.rows();
  ComplexMatrix u = h;
  for (std::size_t i = 0; i < n; ++i) u(i, i) -= lambda;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (abs1(u(k + 1, k)) > abs1(u(k, k))) {
      for (std::size_t j = k; j < n; ++j) std::swap(u(k, j), u(k + 1, j));
      std::swap(x[k], x[k + 1]);
    }
    if (u(k, k) == Complex{}) u(k, k) = tiny;
    const Complex m = u(k + 1, k) / u(k, k);
    if (m != Complex{}) {
      for (std::size_t j = k + 1; j < n; ++j) u(k + 1, j) -= m * u(k, j);
      x[k + 1] -= m * x[k];
    }
    u(k + 1, k) = Complex{};
  }
  if (u(n - 1, n - 1) == Complex{}) u(n - 1, n - 1) = tiny;
  // Back substitution, rescaling the whole system when the solution grows
  // (a nilpotent block amplifies by |h / tiny| per row).
  for (std::size_t i = n; i-- > 0;) {
    Complex acc = x[i];
    for (std::size_t j = i + 1; j < n; ++j) acc -= u(i, j) * x[j];
    x[i] = acc / u(i, i);
    const double big = abs1(x[i]);
    if (big > 1e100) {
      for (Complex& v : x) v /= big;
    }
  }
  return x;
}

double norm2(const std::vector<Complex>& v) {
  double acc = 0.0;
  for (const Complex& z : v) acc += std::norm(z);
  return std::sqrt(acc);
}

std::vector<Complex> inverse_iteration(const ComplexMatrix& h, Complex lambda, double tiny) {
  const std::size_t n = h.rows();
  std::vector<Complex> x(n, Complex{1.0 / std::sqrt(static_cast<double>(n)), 0.0});
  for (int it = 0; it < 4; ++it) {
    std::vector<Complex> y = hessenberg_solve(h, lambda, x, tiny);
    const double ny = norm2(y);
    if (!(ny > 0.0) || !std::isfinite(ny)) break;
    for (std::size_t i = 0; i < n; ++i) x[i] = y[i] / ny;
  }
  return x;
}

}  // namespace

ComplexSpectrum complex_eig(const ComplexMatrix& a) {
  if (a.rows() != a.cols()) throw InvalidParameter("complex_eig: matrix is not square");
  const std::size_t n = a.rows();
  if (n > kMaxDimension) {
    throw InvalidParameter("complex_eig: dimension " + std::to_string(n) + " exceeds 512");
  }
  double fro = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = 0; i < n; ++i) {
      const Complex z = a(i, j);
      if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
        throw InvalidParameter("complex_eig: non-finite matrix entry");
      }
      fro += std::norm(z);
    }
  }
  fro = std::sqrt(fro);

  ComplexSpectrum out;
  out.matrix_norm = fro;
  if (n == 0) return out;

  ComplexMatrix h = a;
  const std::vector<double> scale = balance(h);
  const ComplexMatrix q = hessenberg(h);

  std::size_t iterations = 0;
  std::vector<Complex> lambda = hessenberg_eigenvalues(h, iterations);

  double hnorm = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    double col = 0.0;
    for (std::size_t i = 0; i < n; ++i) col += abs1(h(i, j));
    hnorm = std::max(hnorm, col);
  }
  const double eps3 = std::max(hnorm, std::numeric_limits<double>::min()) * kUlp;

  // Stable order by (real, imag) before computing vectors so that the
  // perturbation of repeated eigenvalues follows the output order.
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
    if (lambda[i].real() != lambda[j].real()) return lambda[i].real() < lambda[j].real();
    return lambda[i].imag() < lambda[j].imag();
  });
  std::vector<Complex> sorted(n);
  for (std::size_t k = 0; k < n; ++k) sorted[k] = lambda[order[k]];

  out.eigenvalues = sorted;
  out.eigenvectors = ComplexMatrix(n, n);
  out.residuals.assign(n, 0.0);
  out.flagged.assign(n, false);

  std::vector<Complex> shifted = sorted;
  for (std::size_t k = 0; k < n; ++k) {
    // Separate repeated eigenvalues so inverse iteration can find distinct vectors.
    for (bool moved = true; moved;) {
      moved = false;
      for (std::size_t j = 0; j < k; ++j) {
        if (abs1(shifted[j] - shifted[k]) < eps3) {
          shifted[k] += eps3;
          moved = true;
        }
      }
    }
    const std::vector<Complex> y = inverse_iteration(h, shifted[k], eps3);

    std::vector<Complex> v(n);
    for (std::size_t i = 0; i < n; ++i) {
      Complex acc{};
      for (std::size_t j = 0; j < n; ++j) acc += q(i, j) * y[j];
      v[i] = acc * scale[i];
    }
    const double nv = norm2(v);
    for (std::size_t i = 0; i < n; ++i) out.eigenvectors(i, k) = v[i] / nv;

    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      Complex av{};
      for (std::size_t j = 0; j < n; ++j) av += a(i, j) * out.eigenvectors(j, k);
      acc += std::norm(av - sorted[k] * out.eigenvectors(i, k));
    }
    out.residuals[k] = std::sqrt(acc);
    out.residual = std::max(out.residual, out.residuals[k]);
    if (!(out.residuals[k] <= 1e-8 * std::max(fro, 1e-300))) out.flagged[k] = true;
  }

  // Nearly parallel vectors for (nearly) equal eigenvalues signal a defective
  // eigenvalue: the vectors do not span an invariant subspace of full rank.
  const double cluster_tol = 1e-6 * std::max(fro, 1e-300);
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t j = k + 1; j < n && abs1(sorted[j] - sorted[k]) <= cluster_tol; ++j) {
      Complex dot{};
      for (std::size_t i = 0; i < n; ++i)
        dot += std::conj(out.eigenvectors(i, k)) * out.eigenvectors(i, j);
      if (std::abs(dot) > 1.0 - 1e-6) {
        out.flagged[k] = true;
        out.flagged[j] = true;
      }
    }
  }
  return out;
}

}  // namespace solvers
}  // namespace pairlat
