#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>

#include "pairlat/error.hpp"
#include "pairlat/solvers.hpp"
#include "pairlat/ssh.hpp"

using namespace pairlat;
using std::numbers::pi;

namespace {

SSHParams params(double t1, double t2, Complex z, int cells = 20) { return SSHParams{t1, t2, z, cells}; }

// Periodic chain of `cells` cells, assembled independently of build_ssh_matrix.
ComplexMatrix periodic_chain(const SSHParams& p) {
  const std::size_t d = 2 * static_cast<std::size_t>(p.n_cells);
  ComplexMatrix h(d, d);
  const Complex z = p.z;
  for (std::size_t c = 0; c < static_cast<std::size_t>(p.n_cells); ++c) {
    const std::size_t a = 2 * c, b = 2 * c + 1;
    const std::size_t b_prev = (a + d - 1) % d, a_next = (b + 1) % d;
    h(a, b) += p.t2 + p.t1 / z;
    h(b, a) += p.t2 + p.t1 * z;
    h(a, b_prev) += p.t1 + p.t2 / z;
    h(b, a_next) += p.t1 + p.t2 * z;
  }
  return h;
}

double nearest_distance(const std::vector<Complex>& set, Complex x) {
  double best = INFINITY;
  for (const auto& y : set) best = std::min(best, std::abs(x - y));
  return best;
}

bool chiral(const std::vector<Complex>& e, double tol) {
  for (const auto& x : e)
    if (nearest_distance(e, -x) > tol) return false;
  return true;
}

}  // namespace

TEST_CASE("ssh matrix entries") {
  const auto p = params(1.0, 0.8, Complex{-0.85, 0.0}, 3);
  const auto h = build_ssh_matrix(p);
  REQUIRE(h.rows() == 6);
  const Complex z = p.z;
  // A_n = 2(n-1), B_n = 2(n-1)+1
  CHECK(std::abs(h(0, 1) - (0.8 + 1.0 / z)) < 1e-15);
  CHECK(std::abs(h(1, 0) - (0.8 + 1.0 * z)) < 1e-15);
  CHECK(std::abs(h(2, 1) - (1.0 + 0.8 / z)) < 1e-15);
  CHECK(std::abs(h(1, 2) - (1.0 + 0.8 * z)) < 1e-15);
  CHECK(std::abs(h(0, 5)) == 0.0);  // open boundary
  CHECK(std::abs(h(5, 0)) == 0.0);
  for (std::size_t i = 0; i < 6; ++i) CHECK(std::abs(h(i, i)) == 0.0);

  CHECK_THROWS_AS(build_ssh_matrix(params(1.0, 0.8, Complex{0.0, 0.0})), InvalidParameter);
  CHECK_THROWS_AS(build_ssh_matrix(params(1.0, 0.8, Complex{1.0, 0.0}, 1)), InvalidParameter);
}

TEST_CASE("ssh at z = 1 is the uniform Hermitian chain") {
  const auto h = build_ssh_matrix(params(1.0, 0.3, Complex{1.0, 0.0}, 10));
  for (std::size_t i = 0; i < h.rows(); ++i)
    for (std::size_t j = 0; j < h.cols(); ++j) {
      CHECK(std::abs(h(i, j) - std::conj(h(j, i))) < 1e-15);
      if (j == i + 1) CHECK(std::abs(h(i, j) - 1.3) < 1e-15);
    }
  const auto s = solvers::complex_eig(h);
  for (std::size_t k = 0; k < s.eigenvalues.size(); ++k) CHECK(std::abs(s.eigenvalues[k].imag()) < 1e-10);
}

TEST_CASE("ssh spectrum has chiral symmetry") {
  for (double t2 : {0.0, 0.3, 0.8, 1.4})
    for (Complex z : {Complex{-0.85, 0.0}, Complex{0.5, 0.0}, std::polar(0.7, 1.1), Complex{1.6, 0.0}}) {
      const auto s = solvers::complex_eig(build_ssh_matrix(params(1.0, t2, z, 12)));
      CHECK(chiral(s.eigenvalues, 1e-8));
    }
}

TEST_CASE("ssh bound-state parameters have a level near -0.259") {
  const auto s = solvers::complex_eig(build_ssh_matrix(params(1.0, 0.8, Complex{-0.85, 0.0}, 20)));
  CHECK(nearest_distance(s.eigenvalues, Complex{-0.259, 0.0}) < 0.01);
}

TEST_CASE("bulk energy") {
  const auto flat = params(1.0, 0.8, Complex{1.0, 0.0});
  const auto e0 = bulk_energy(flat, 0.0);
  CHECK(std::abs(e0[0] - Complex{3.6, 0.0}) < 1e-12);
  CHECK(std::abs(e0[1] + e0[0]) < 1e-15);
  CHECK(std::abs(bulk_energy(flat, pi)[0]) < 1e-7);

  // Direct evaluation at z = 0.5, kappa = pi / 2: e^{-i kappa} = -i.
  const auto p = params(1.0, 0.8, Complex{0.5, 0.0});
  const Complex f1 = Complex{0.8 + 2.0, 0.0} + Complex{1.0 + 1.6, 0.0} * Complex{0.0, -1.0};
  const Complex f2 = Complex{0.8 + 0.5, 0.0} + Complex{1.0 + 0.4, 0.0} * Complex{0.0, 1.0};
  const Complex h = f1 * f2;
  CHECK(std::abs(bulk_h(p, pi / 2) - h) < 1e-13);
  const auto e = bulk_energy(p, pi / 2);
  CHECK(std::abs(e[0] * e[0] - h) < 1e-13);
  CHECK(std::abs(e[1] + e[0]) < 1e-15);
  CHECK(e[0].real() >= 0.0);
}

TEST_CASE("bulk energy matches the periodic chain") {
  for (Complex z : {Complex{-0.85, 0.0}, std::polar(0.6, 0.9)}) {
    auto p = params(1.0, 0.8, z, 9);
    const auto s = solvers::complex_eig(periodic_chain(p));
    REQUIRE_FALSE(s.any_flagged());
    for (int q = 0; q < p.n_cells; ++q) {
      const double kappa = 2.0 * pi * q / p.n_cells;
      const auto e = bulk_energy(p, kappa);
      CHECK(nearest_distance(s.eigenvalues, e[0]) < 1e-8);
      CHECK(nearest_distance(s.eigenvalues, e[1]) < 1e-8);
    }
  }
}

TEST_CASE("winding number") {
  const auto hermitian = winding_number(params(1.0, 0.8, Complex{1.0, 0.0}));
  CHECK(hermitian.gap_closed);
  const auto equal = winding_number(params(1.0, 1.0, Complex{-0.85, 0.0}));
  CHECK(equal.gap_closed);
  CHECK(equal.min_abs_h < 1e-12);

  const auto w = winding_number(params(1.0, 0.8, Complex{0.5, 0.0}));
  CHECK_FALSE(w.gap_closed);
  CHECK(w.winding == 1);
  CHECK(w.min_abs_h > 0.0);

  for (Complex z : {Complex{0.5, 0.0}, Complex{-0.85, 0.0}, Complex{1.7, 0.0}, std::polar(0.4, 2.0)})
    for (double t2 : {0.2, 0.8, 1.3}) {
      const auto p = params(1.0, t2, z);
      const auto a = winding_number(p, 512);
      const auto b = winding_number(p, 1024);
      const auto c = winding_number(p, 4096);
      CHECK(a.gap_closed == b.gap_closed);
      if (!a.gap_closed) {
        CHECK(a.winding == b.winding);
        CHECK(b.winding == c.winding);
      }
    }
  CHECK_THROWS_AS(winding_number(params(1.0, 0.8, Complex{0.5, 0.0}), 100), InvalidParameter);
}

TEST_CASE("skin ratio") {
  CHECK(std::abs(skin_ratio(params(1.0, 0.8, Complex{1.0, 0.0})) - 1.0) < 1e-15);
  CHECK(std::abs(skin_ratio(params(0.7, 0.7, std::polar(0.3, 1.2))) - 1.0) < 1e-15);
  const Complex r = skin_ratio(params(1.0, 0.8, Complex{-0.85, 0.0}));
  CHECK(r.real() == doctest::Approx(-0.15625).epsilon(1e-12));
  CHECK(r.imag() == 0.0);
  CHECK_THROWS_AS(skin_ratio(params(1.0, 0.5, Complex{-2.0, 0.0})), InvalidParameter);
}

TEST_CASE("localization parameter of the Hermitian chain vanishes") {
  CHECK(std::abs(localization_parameter(params(1.0, 0.8, Complex{1.0, 0.0}))) < 1e-10);
  CHECK(std::abs(localization_parameter(params(1.0, 0.3, Complex{1.0, 0.0}, 7))) < 1e-10);
}

TEST_CASE("localization parameter at t1 = t2 against the similarity-transform oracle") {
  // With t1 = t2 = t the chain is diagonal-similar to a uniform symmetric chain:
  // v_A = u_A, v_B = sqrt(z) u_B with u_j = sin(pi k j / (2N + 1)). The
  // localization parameter is then the mean of (|u_1|^2 - |z| |u_2N|^2) / norm,
  // which is nonzero once |z| != 1.
  for (Complex z : {Complex{-0.85, 0.0}, Complex{0.5, 0.0}, std::polar(1.0, 0.7), std::polar(1.5, 2.2)}) {
    const int cells = 10;
    const int d = 2 * cells;
    double expected = 0.0;
    for (int k = 1; k <= d; ++k) {
      double norm = 0.0;
      for (int j = 1; j <= d; ++j) {
        const double u = std::sin(pi * k * j / (d + 1));
        norm += (j % 2 == 1 ? 1.0 : std::abs(z)) * u * u;
      }
      const double u1 = std::sin(pi * k / (d + 1));
      const double ud = std::sin(pi * k * d / (d + 1));
      expected += (u1 * u1 - std::abs(z) * ud * ud) / norm;
    }
    expected /= d;
    const double got = localization_parameter(params(0.9, 0.9, z, cells));
    CHECK(got == doctest::Approx(expected).epsilon(1e-9).scale(1.0));
    if (std::abs(std::abs(z) - 1.0) < 1e-12) CHECK(std::abs(got) < 1e-10);
  }
}

TEST_CASE("localization parameter follows the skin ratio") {
  CHECK(localization_parameter(params(1.0, 0.8, Complex{-0.85, 0.0}, 20)) > 0.0);

  int checked = 0;
  int exceptional = 0;
  for (int i = 0; i < 20; ++i)
    for (int j = 0; j < 20; ++j) {
      const double ratio = 0.1 + 0.1 * j;
      const double zr = -2.0 + 4.0 * (i + 0.5) / 20.0;
      const auto p = params(1.0, ratio, Complex{zr, 0.0}, 20);
      if (winding_number(p).gap_closed || std::abs(p.t2 * p.z + p.t1) < 1e-12) continue;
      // t1 z + t2 = 0 is an exceptional point: the chain is nilpotent and its
      // only eigenvector sits on A1.
      if (std::abs(p.t1 * p.z + p.t2) < 1e-12) {
        CHECK(localization_parameter(p) == doctest::Approx(1.0));
        ++exceptional;
      }
      const double r = std::abs(skin_ratio(p));
      const double lp = localization_parameter(p);
      if (r < 0.9) {
        INFO("t2/t1 = " << ratio << ", z = " << zr << ", ratio " << r);
        CHECK(lp > 0.0);
        ++checked;
      } else if (r > 1.0 / 0.9) {
        INFO("t2/t1 = " << ratio << ", z = " << zr << ", ratio " << r);
        CHECK(lp < 0.0);
        ++checked;
      }
    }
  CHECK(checked > 100);
  CHECK(exceptional == 10);  // t2 / t1 = -z for the ten odd tenths
}

TEST_CASE("localization map") {
  const std::vector<double> ratios = {0.2, 0.6, 1.0, 1.4};
  std::vector<Complex> zs = {Complex{-0.85, 0.0}, Complex{1.0, 0.0}, Complex{0.5, 0.0}};
  const auto map = localization_map(1.0, ratios, zs, 10, 2);
  REQUIRE(map.value.rows() == 3);
  REQUIRE(map.value.cols() == 4);
  for (std::size_t j = 0; j < ratios.size(); ++j) {
    CHECK(std::abs(map.value(1, j)) < 1e-10);  // z = 1 row
    CHECK(map.gap_closed(1, j) == 1);
  }
  for (std::size_t i = 0; i < zs.size(); ++i) {
    CHECK(map.gap_closed(i, 2) == 1);  // t2 = t1 column
    CHECK(map.value(i, 2) == 0.0);
  }
  for (std::size_t i = 0; i < zs.size(); ++i)
    for (std::size_t j = 0; j < ratios.size(); ++j)
      if (!map.gap_closed(i, j))
        CHECK(map.value(i, j) == doctest::Approx(localization_parameter(params(1.0, ratios[j], zs[i], 10))));

  // Darkest region: negative z with t2 / t1 near one.
  const std::vector<double> fine = {0.3, 0.9};
  const std::vector<Complex> neg = {Complex{-0.85, 0.0}};
  const auto m2 = localization_map(1.0, fine, neg, 20);
  CHECK(std::abs(m2.value(0, 1)) > std::abs(m2.value(0, 0)));

  CHECK_THROWS_AS(localization_map(1.0, std::vector<double>{}, zs, 10), InvalidParameter);
  const auto grid = default_z_grid(40);
  CHECK(grid.size() == 80);
  CHECK(grid.front().real() == doctest::Approx(-2.0));
  CHECK(grid[39].real() == doctest::Approx(-0.05));
  CHECK(grid.back().real() == doctest::Approx(2.0));
}
