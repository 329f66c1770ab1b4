#include "pairlat/wannier_stark.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "pairlat/error.hpp"
#include "pairlat/observables.hpp"

namespace pairlat {

ColumnState standing_wave(int h, int j, double t1) {
  if (h < 1 || j < 1 || j > h) {
    throw InvalidParameter("standing_wave: need 1 <= j <= h, got h = " + std::to_string(h) +
                           ", j = " + std::to_string(j));
  }
  ColumnState s;
  s.height = h;
  s.mode = j;
  s.k = std::numbers::pi * j / (h + 1);
  s.energy = 2.0 * t1 * std::cos(s.k);
  const double norm = std::sqrt(2.0 / (h + 1));
  s.amplitude.resize(static_cast<std::size_t>(h));
  for (int m = 1; m <= h; ++m) s.amplitude[m - 1] = norm * std::sin(s.k * m);
  return s;
}

ColumnCoupling column_coupling(int h, int j, int jp, double t2, double t1) {
  const ColumnState lower = standing_wave(h, j, t1);
  const ColumnState upper = standing_wave(h + 1, jp, t1);
  ColumnCoupling c;
  double acc = 0.0;
  for (int m = 0; m < h; ++m) acc += lower.amplitude[m] * upper.amplitude[m];
  c.direct = t2 * acc;

  const double dc = std::cos(lower.k) - std::cos(upper.k);
  c.resonant = std::abs(dc) < 1e-9;
  const int n = h + 1;
  if (!c.resonant && h > 1) {
    c.analytic = -t2 / std::sqrt(static_cast<double>(n) * (n - 1)) * std::sin(lower.k) * std::sin(upper.k) / dc;
  }
  return c;
}

StarkParams stark_params(int n0, double t1, double t2) {
  if (n0 < 3) throw InvalidParameter("stark_params: n0 must be >= 3");
  if (t1 == 0.0) throw InvalidParameter("stark_params: t1 must be nonzero");
  const double sqrt3 = std::numbers::sqrt3;
  const double pi = std::numbers::pi;
  StarkParams p;
  p.n0 = n0;
  p.field = pi / (sqrt3 * n0);
  p.quadratic = -pi * (6.0 * sqrt3 + pi) / (18.0 * static_cast<double>(n0) * n0);
  p.tau = 3.0 * sqrt3 * t2 / (2.0 * pi * t1);
  return p;
}

Tridiagonal stark_matrix(const StarkParams& p, int window) {
  if (window < 10) throw InvalidParameter("stark_matrix: window must be >= 10");
  Tridiagonal t;
  for (int d = -window; d <= window; ++d) t.diagonal.push_back(p.field * d + p.quadratic * d * d);
  t.offdiagonal.assign(static_cast<std::size_t>(2 * window), p.tau);
  return t;
}

StarkTarget stark_target(const StarkParams& p, int window) {
  const Tridiagonal t = stark_matrix(p, window);
  const Spectrum s = solvers::tridiag_eig(t.diagonal, t.offdiagonal, true);
  const auto center = static_cast<std::size_t>(window);
  StarkTarget best;
  best.center_weight = -1.0;
  for (std::size_t j = 0; j < s.size(); ++j) {
    const double w = s.eigenvectors(center, j) * s.eigenvectors(center, j);
    if (w > best.center_weight) {
      best.center_weight = w;
      best.eigenvalue = s.eigenvalues[j];
      best.index = j;
    }
  }
  return best;
}

FlatbandEnergy flatband_energy(double t1, double t2) {
  // epsilon is the same for every n0; evaluate at any admissible one.
  const StarkParams p = stark_params(30, t1, t2);
  const double r = t2 / t1;
  FlatbandEnergy f;
  f.epsilon = 2.0 * p.quadratic * p.tau * p.tau / (p.field * p.field);
  f.energy = t1 * (1.0 + f.epsilon);
  f.rounded = -0.98 * r * r;
  f.simple = t1 - t2 * t2 / t1;
  return f;
}

namespace {

double bessel_series(int n, double x) {
  // n >= 0, |x| < 1
  const double half = 0.5 * x;
  double term = 1.0;
  for (int k = 1; k <= n; ++k) term *= half / k;
  double sum = term;
  const double q = -half * half;
  for (int k = 1; k < 200; ++k) {
    term *= q / (static_cast<double>(k) * (n + k));
    sum += term;
    if (std::abs(term) <= 1e-17 * std::abs(sum)) break;
  }
  return sum;
}

// J_0..J_nmax for x > 0 by Miller's algorithm, normalized with
// J_0 + 2 (J_2 + J_4 + ...) = 1.
std::vector<double> miller(int nmax, double x) {
  const double top = std::max<double>(nmax, x);
  int start = static_cast<int>(top + 30.0 + std::sqrt(60.0 * top));
  start += start % 2;
  std::vector<double> j(static_cast<std::size_t>(start) + 2, 0.0);
  j[static_cast<std::size_t>(start)] = 1e-300;
  constexpr double kBig = 1e250;
  for (int k = start; k >= 1; --k) {
    const auto uk = static_cast<std::size_t>(k);
    j[uk - 1] = 2.0 * k / x * j[uk] - j[uk + 1];
    if (std::abs(j[uk - 1]) > kBig) {
      for (std::size_t i = uk - 1; i <= static_cast<std::size_t>(start); ++i) j[i] /= kBig;
    }
  }
  double norm = j[0];
  for (int k = 2; k <= start; k += 2) norm += 2.0 * j[static_cast<std::size_t>(k)];
  j.resize(static_cast<std::size_t>(nmax) + 1);
  for (double& v : j) v /= norm;
  return j;
}

}  // namespace

std::vector<double> bessel_j_sequence(int nmax, double x) {
  if (nmax < 0) throw InvalidParameter("bessel_j_sequence: nmax must be >= 0");
  if (!(std::abs(x) <= 50.0)) throw InvalidParameter("bessel_j: |x| must be <= 50");
  std::vector<double> j(static_cast<std::size_t>(nmax) + 1, 0.0);
  if (x == 0.0) {
    j[0] = 1.0;
    return j;
  }
  if (std::abs(x) < 1.0) {
    for (int n = 0; n <= nmax; ++n) j[static_cast<std::size_t>(n)] = bessel_series(n, std::abs(x));
  } else {
    j = miller(nmax, std::abs(x));
  }
  if (x < 0.0)
    for (int n = 1; n <= nmax; n += 2) j[static_cast<std::size_t>(n)] = -j[static_cast<std::size_t>(n)];
  return j;
}

double bessel_j(int n, double x) {
  if (std::abs(n) > 200) throw InvalidParameter("bessel_j: |n| must be <= 200");
  const int an = std::abs(n);
  const double v = bessel_j_sequence(an, x)[static_cast<std::size_t>(an)];
  return (n < 0 && an % 2 == 1) ? -v : v;
}

namespace {

int truncation_order(double x) { return static_cast<int>(std::abs(x) + 40.0 + 4.0 * std::cbrt(std::abs(x) + 1.0)); }

}  // namespace

double appendix_sum(double x) {
  if (!(std::abs(x) <= 40.0)) throw InvalidParameter("appendix_sum: |x| must be <= 40");
  const int nmax = truncation_order(x);
  const auto j = bessel_j_sequence(nmax, x);
  double s = 0.0;
  for (int n = nmax; n >= 1; --n) s += static_cast<double>(n) * n * j[static_cast<std::size_t>(n)] * j[static_cast<std::size_t>(n)];
  return 2.0 * s;
}

double bessel_norm_sum(double x) {
  const int nmax = truncation_order(x);
  const auto j = bessel_j_sequence(nmax, x);
  double s = 0.0;
  for (int n = nmax; n >= 1; --n) s += j[static_cast<std::size_t>(n)] * j[static_cast<std::size_t>(n)];
  return j[0] * j[0] + 2.0 * s;
}

double ladder_recurrence_residual(double field, double tau, int nmax) {
  if (field == 0.0) throw InvalidParameter("ladder_recurrence_residual: F must be nonzero");
  const double x = -2.0 * tau / field;
  const auto j = bessel_j_sequence(nmax + 1, x);
  auto psi = [&](int n) {
    const int an = std::abs(n);
    const double v = j[static_cast<std::size_t>(an)];
    return (n < 0 && an % 2 == 1) ? -v : v;
  };
  double worst = 0.0;
  for (int n = -nmax; n <= nmax; ++n) {
    worst = std::max(worst, std::abs(field * n * psi(n) + tau * (psi(n + 1) + psi(n - 1))));
  }
  return worst;
}

PerturbationFit perturbation_coefficient(double k, std::span<const double> t2_values,
                                         std::span<const std::vector<double>> spectra, double t1, double tol) {
  if (t2_values.size() != spectra.size()) throw InvalidParameter("perturbation_coefficient: size mismatch");
  if (t2_values.size() < 2) throw InvalidParameter("perturbation_coefficient: need at least two t2 values");
  PerturbationFit f;
  f.k = k;
  f.e0 = 2.0 * t1 * std::cos(k);
  double sxy = 0.0;
  double sxx = 0.0;
  for (std::size_t i = 0; i < t2_values.size(); ++i) {
    const double t2 = t2_values[i];
    const double window = 3.0 * t2 * t2 / std::abs(t1) + tol;
    const DegeneracyCluster c = find_flat_band(spectra[i], f.e0, window, tol);
    f.cluster_means.push_back(c.mean);
    f.cluster_sizes.push_back(c.count);
    const double x = t2 * t2 / t1;
    sxx += x * x;
    sxy += x * (f.e0 - c.mean);
  }
  f.nu = sxy / sxx;
  double rss = 0.0;
  for (std::size_t i = 0; i < t2_values.size(); ++i) {
    const double d = f.cluster_means[i] - (f.e0 - f.nu * t2_values[i] * t2_values[i] / t1);
    rss += d * d;
  }
  f.residual = std::sqrt(rss / static_cast<double>(t2_values.size()));
  return f;
}

}  // namespace pairlat
