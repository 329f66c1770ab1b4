#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstring>
#include <numbers>
#include <random>

#include "pairlat/error.hpp"
#include "pairlat/solvers.hpp"

using namespace pairlat;

namespace {

RealMatrix random_symmetric(std::size_t n, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  RealMatrix a(n, n);
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t i = 0; i <= j; ++i) a(i, j) = a(j, i) = u(rng);
  return a;
}

ComplexMatrix random_complex(std::size_t n, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  ComplexMatrix a(n, n);
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t i = 0; i < n; ++i) a(i, j) = Complex(g(rng), g(rng));
  return a;
}

double orthonormality_defect(const RealMatrix& v) {
  double worst = 0.0;
  for (std::size_t a = 0; a < v.cols(); ++a) {
    for (std::size_t b = a; b < v.cols(); ++b) {
      double dot = 0.0;
      for (std::size_t i = 0; i < v.rows(); ++i) dot += v(i, a) * v(i, b);
      worst = std::max(worst, std::abs(dot - (a == b ? 1.0 : 0.0)));
    }
  }
  return worst;
}

// Determinant by Gaussian elimination with partial pivoting.
Complex determinant(ComplexMatrix a) {
  const std::size_t n = a.rows();
  Complex det{1.0, 0.0};
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t p = k;
    for (std::size_t i = k + 1; i < n; ++i)
      if (std::abs(a(i, k)) > std::abs(a(p, k))) p = i;
    if (p != k) {
      for (std::size_t j = 0; j < n; ++j) std::swap(a(k, j), a(p, j));
      det = -det;
    }
    det *= a(k, k);
    for (std::size_t i = k + 1; i < n; ++i) {
      const Complex f = a(i, k) / a(k, k);
      for (std::size_t j = k; j < n; ++j) a(i, j) -= f * a(k, j);
    }
  }
  return det;
}

// Greedy multiset match; returns the largest distance between paired values.
double multiset_distance(std::vector<Complex> a, std::vector<Complex> b) {
  double worst = 0.0;
  for (const Complex& x : a) {
    auto it = std::min_element(b.begin(), b.end(),
                               [&](const Complex& p, const Complex& q) { return std::abs(p - x) < std::abs(q - x); });
    worst = std::max(worst, std::abs(*it - x));
    b.erase(it);
  }
  return worst;
}

ComplexMatrix ssh_like(std::size_t cells, double t1, double t2, Complex z) {
  ComplexMatrix h(2 * cells, 2 * cells);
  for (std::size_t n = 0; n < cells; ++n) {
    const std::size_t a = 2 * n, b = 2 * n + 1;
    h(a, b) = t2 + t1 / z;
    h(b, a) = t2 + t1 * z;
    if (n > 0) h(a, b - 2) = t1 + t2 / z;
    if (n + 1 < cells) h(b, a + 2) = t1 + t2 * z;
  }
  return h;
}

}  // namespace

TEST_CASE("sym_eig: 2x2 swap matrix") {
  RealMatrix a(2, 2);
  a(0, 1) = a(1, 0) = 1.0;
  const Spectrum s = solvers::sym_eig(a);
  CHECK(s.eigenvalues[0] == doctest::Approx(-1.0).epsilon(1e-14));
  CHECK(s.eigenvalues[1] == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(orthonormality_defect(s.eigenvectors) < 1e-14);
}

TEST_CASE("sym_eig: degenerate matrix still yields an orthonormal pair") {
  RealMatrix a(2, 2);
  a(0, 0) = a(1, 1) = 2.0;
  const Spectrum s = solvers::sym_eig(a);
  CHECK(s.eigenvalues[0] == doctest::Approx(2.0));
  CHECK(s.eigenvalues[1] == doctest::Approx(2.0));
  CHECK(orthonormality_defect(s.eigenvectors) < 1e-14);
}

TEST_CASE("sym_eig: open chain of 100 sites") {
  const std::size_t n = 100;
  RealMatrix a(n, n);
  for (std::size_t i = 0; i + 1 < n; ++i) a(i, i + 1) = a(i + 1, i) = 1.0;
  const Spectrum s = solvers::sym_eig(a);
  std::vector<double> exact;
  for (std::size_t j = 1; j <= n; ++j) exact.push_back(2.0 * std::cos(std::numbers::pi * j / (n + 1)));
  std::sort(exact.begin(), exact.end());
  for (std::size_t j = 0; j < n; ++j) CHECK(std::abs(s.eigenvalues[j] - exact[j]) < 1e-12);
  CHECK(s.residual <= 1e-9 * s.max_abs_eigenvalue());
}

TEST_CASE("sym_eig: trace, Frobenius norm, orthonormality and residual on random matrices") {
  for (unsigned seed : {1u, 2u, 3u}) {
    const std::size_t n = 60 + seed * 17;
    const RealMatrix a = random_symmetric(n, seed);
    const Spectrum s = solvers::sym_eig(a);
    double trace = 0.0, fro2 = 0.0, sum = 0.0, sum2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      trace += a(i, i);
      for (std::size_t j = 0; j < n; ++j) fro2 += a(i, j) * a(i, j);
      sum += s.eigenvalues[i];
      sum2 += s.eigenvalues[i] * s.eigenvalues[i];
    }
    CHECK(std::abs(sum - trace) <= 1e-9 * std::max(1.0, std::abs(trace)));
    CHECK(std::abs(sum2 - fro2) <= 1e-9 * fro2);
    CHECK(std::is_sorted(s.eigenvalues.begin(), s.eigenvalues.end()));
    CHECK(orthonormality_defect(s.eigenvectors) < 1e-10);
    CHECK(s.residual <= 1e-9 * s.max_abs_eigenvalue());
  }
}

TEST_CASE("sym_eig: bitwise deterministic") {
  const RealMatrix a = random_symmetric(120, 7);
  const Spectrum s1 = solvers::sym_eig(a);
  const Spectrum s2 = solvers::sym_eig(a);
  CHECK(std::memcmp(s1.eigenvalues.data(), s2.eigenvalues.data(), sizeof(double) * 120) == 0);
  CHECK(std::memcmp(s1.eigenvectors.data(), s2.eigenvectors.data(), sizeof(double) * 120 * 120) == 0);
}

TEST_CASE("sym_eig: rejects asymmetric input") {
  RealMatrix a(3, 3);
  a(0, 1) = 1.0;
  a(1, 0) = 1.0 + 1e-6;
  CHECK_THROWS_AS(solvers::sym_eig(a), SymmetryError);
  RealMatrix b(2, 3);
  CHECK_THROWS_AS(solvers::sym_eig(b), SymmetryError);
}

TEST_CASE("sym_band_eigenvalues agrees with the dense solver") {
  const std::size_t n = 90, kd = 7;
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  RealMatrix a(n, n);
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t i = (j >= kd ? j - kd : 0); i <= j; ++i) a(i, j) = a(j, i) = u(rng);
  std::vector<double> band((kd + 1) * n, 0.0);
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t i = (j >= kd ? j - kd : 0); i <= j; ++i) band[(kd + i - j) + j * (kd + 1)] = a(i, j);
  const auto w = solvers::sym_band_eigenvalues(n, kd, band);
  const Spectrum s = solvers::sym_eig(a);
  for (std::size_t i = 0; i < n; ++i) CHECK(std::abs(w[i] - s.eigenvalues[i]) < 1e-12);
  CHECK_THROWS_AS(solvers::sym_band_eigenvalues(n, kd, std::vector<double>(3)), InvalidParameter);
}

TEST_CASE("tridiag_eig: open chain closed form and vectors") {
  const std::size_t n = 100;
  const std::vector<double> d(n, 0.0), e(n - 1, 1.0);
  const Spectrum s = solvers::tridiag_eig(d, e);
  for (std::size_t j = 0; j < n; ++j) {
    const double exact = 2.0 * std::cos(std::numbers::pi * (n - j) / (n + 1));
    CHECK(std::abs(s.eigenvalues[j] - exact) < 1e-12);
  }
  CHECK(orthonormality_defect(s.eigenvectors) < 1e-12);
  CHECK(s.residual < 1e-12);
}

TEST_CASE("tridiag_eig matches the dense solver on random input") {
  const std::size_t n = 75;
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  std::vector<double> d(n), e(n - 1);
  for (auto& v : d) v = u(rng);
  for (auto& v : e) v = u(rng);
  RealMatrix a(n, n);
  for (std::size_t i = 0; i < n; ++i) a(i, i) = d[i];
  for (std::size_t i = 0; i + 1 < n; ++i) a(i, i + 1) = a(i + 1, i) = e[i];
  const Spectrum t = solvers::tridiag_eig(d, e);
  const Spectrum s = solvers::sym_eig(a);
  for (std::size_t i = 0; i < n; ++i) CHECK(std::abs(t.eigenvalues[i] - s.eigenvalues[i]) < 1e-12);
  const Spectrum v = solvers::tridiag_eig(d, e, false);
  CHECK(v.eigenvectors.empty());
  CHECK(v.eigenvalues == t.eigenvalues);
  CHECK_THROWS_AS(solvers::tridiag_eig(d, std::vector<double>(3)), InvalidParameter);
}

TEST_CASE("complex_eig: Jordan block is flagged") {
  ComplexMatrix a(2, 2);
  a(0, 1) = 1.0;
  const ComplexSpectrum s = solvers::complex_eig(a);
  REQUIRE(s.eigenvalues.size() == 2);
  CHECK(std::abs(s.eigenvalues[0]) < 1e-12);
  CHECK(std::abs(s.eigenvalues[1]) < 1e-12);
  CHECK(s.any_flagged());
}

TEST_CASE("complex_eig: long nilpotent shift keeps its single eigenvector") {
  const std::size_t n = 40;
  ComplexMatrix a(n, n);
  for (std::size_t i = 0; i + 1 < n; ++i) a(i, i + 1) = (i % 2 == 0) ? -1.5 : 0.75;
  const ComplexSpectrum s = solvers::complex_eig(a);
  CHECK(s.any_flagged());
  for (std::size_t k = 0; k < n; ++k) {
    CHECK(std::abs(s.eigenvalues[k]) < 1e-12);
    CHECK(s.residuals[k] < 1e-12);
    CHECK(std::abs(s.eigenvectors(0, k)) == doctest::Approx(1.0));
  }
}

TEST_CASE("complex_eig: off-diagonal pair gives +-sqrt(ab)") {
  ComplexMatrix a(2, 2);
  a(0, 1) = 2.0;
  a(1, 0) = 0.5;
  const ComplexSpectrum s = solvers::complex_eig(a);
  CHECK(std::abs(s.eigenvalues[0] - Complex(-1.0, 0.0)) < 1e-12);
  CHECK(std::abs(s.eigenvalues[1] - Complex(1.0, 0.0)) < 1e-12);
  CHECK_FALSE(s.any_flagged());
}

TEST_CASE("complex_eig: 40x40 chain with complex z has a +-E symmetric spectrum") {
  const ComplexSpectrum s = solvers::complex_eig(ssh_like(20, 1.0, 0.8, std::polar(0.7, 0.9)));
  std::vector<Complex> neg;
  for (const auto& e : s.eigenvalues) neg.push_back(-e);
  CHECK(multiset_distance(s.eigenvalues, neg) < 1e-8);
  CHECK(s.residual <= 1e-8 * s.matrix_norm);
}

TEST_CASE("complex_eig: determinant, residuals and ordering on random matrices") {
  for (unsigned seed : {3u, 4u}) {
    const ComplexMatrix a = random_complex(48, seed);
    const ComplexSpectrum s = solvers::complex_eig(a);
    Complex prod{1.0, 0.0};
    for (const auto& e : s.eigenvalues) prod *= e;
    const Complex det = determinant(a);
    CHECK(std::abs(prod - det) <= 1e-6 * std::abs(det));
    CHECK_FALSE(s.any_flagged());
    for (double r : s.residuals) CHECK(r <= 1e-8 * s.matrix_norm);
    for (std::size_t i = 1; i < s.eigenvalues.size(); ++i) {
      const auto& p = s.eigenvalues[i - 1];
      const auto& q = s.eigenvalues[i];
      CHECK((p.real() < q.real() || (p.real() == q.real() && p.imag() <= q.imag())));
    }
    for (std::size_t k = 0; k < s.eigenvalues.size(); ++k) {
      double nv = 0.0;
      for (std::size_t i = 0; i < 48; ++i) nv += std::norm(s.eigenvectors(i, k));
      CHECK(std::abs(nv - 1.0) < 1e-12);
    }
  }
}

TEST_CASE("complex_eig: spectrum invariant under diagonal similarity") {
  const ComplexMatrix a = random_complex(30, 9);
  std::mt19937_64 rng(10);
  std::uniform_real_distribution<double> u(0.2, 5.0);
  std::vector<double> d(30);
  for (auto& v : d) v = u(rng);
  ComplexMatrix b(30, 30);
  for (std::size_t j = 0; j < 30; ++j)
    for (std::size_t i = 0; i < 30; ++i) b(i, j) = a(i, j) * d[j] / d[i];
  CHECK(multiset_distance(solvers::complex_eig(a).eigenvalues, solvers::complex_eig(b).eigenvalues) < 1e-7);
}

TEST_CASE("complex_eig: Hermitian input reproduces the real symmetric solver") {
  const RealMatrix r = random_symmetric(25, 12);
  ComplexMatrix c(25, 25);
  for (std::size_t j = 0; j < 25; ++j)
    for (std::size_t i = 0; i < 25; ++i) c(i, j) = r(i, j);
  const ComplexSpectrum s = solvers::complex_eig(c);
  const Spectrum t = solvers::sym_eig(r);
  for (std::size_t i = 0; i < 25; ++i) {
    CHECK(std::abs(s.eigenvalues[i].real() - t.eigenvalues[i]) < 1e-10);
    CHECK(std::abs(s.eigenvalues[i].imag()) < 1e-10);
  }
}

TEST_CASE("complex_eig: input validation") {
  CHECK_THROWS_AS(solvers::complex_eig(ComplexMatrix(513, 513)), InvalidParameter);
  CHECK_THROWS_AS(solvers::complex_eig(ComplexMatrix(2, 3)), InvalidParameter);
  ComplexMatrix a(2, 2);
  a(0, 0) = Complex(std::nan(""), 0.0);
  CHECK_THROWS_AS(solvers::complex_eig(a), InvalidParameter);
  CHECK(solvers::complex_eig(ComplexMatrix(0, 0)).eigenvalues.empty());
}
