#include "pairlat/observables.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "pairlat/error.hpp"

namespace pairlat {

double DosCurve::integral() const {
  double s = 0.0;
  for (std::size_t i = 1; i < energy.size(); ++i)
    s += 0.5 * (density[i] + density[i - 1]) * (energy[i] - energy[i - 1]);
  return s;
}

std::vector<std::size_t> DegeneracyCluster::members() const {
  std::vector<std::size_t> out(count);
  for (std::size_t k = 0; k < count; ++k) out[k] = first + k;
  return out;
}

double ipr(std::span<const double> psi) {
  double s2 = 0.0;
  double s4 = 0.0;
  for (double v : psi) {
    const double p = v * v;
    s2 += p;
    s4 += p * p;
  }
  if (!(s2 > 0.0)) throw InvalidParameter("ipr: zero amplitude vector");
  return s4 / (s2 * s2);
}

double ipr(const TwoParticleAmplitude& psi) { return ipr(std::span<const double>(psi.psi)); }

std::vector<double> ipr_all(const Spectrum& s) {
  std::vector<double> out(s.size());
  for (std::size_t j = 0; j < s.size(); ++j) out[j] = ipr(s.eigenvectors.col(j));
  return out;
}

EnergyGrid default_dos_grid(std::span<const double> energies, double sigma) {
  if (energies.empty()) throw InvalidParameter("dos grid: empty energy list");
  if (!(sigma > 0.0)) throw InvalidParameter("dos grid: sigma must be positive");
  const auto [lo, hi] = std::minmax_element(energies.begin(), energies.end());
  // Grid points sit on integer multiples of sigma so that grids for different
  // spectra line up.
  const double emin = std::floor((*lo - 5.0 * sigma) / sigma) * sigma;
  const double emax = std::ceil((*hi + 5.0 * sigma) / sigma) * sigma;
  EnergyGrid g;
  g.emin = emin;
  g.emax = emax;
  g.points = static_cast<std::size_t>(std::llround((emax - emin) / sigma)) + 1;
  return g;
}

namespace {

DosCurve dos_impl(std::span<const double> energies, std::span<const double> iprs, double threshold,
                  const EnergyGrid& grid, double sigma) {
  if (!(sigma > 0.0)) throw InvalidParameter("dos: sigma must be positive");
  if (grid.points < 2 || !(grid.emax > grid.emin)) throw InvalidParameter("dos: degenerate energy grid");
  DosCurve c;
  c.sigma = sigma;
  c.energy.resize(grid.points);
  c.density.assign(grid.points, 0.0);
  for (std::size_t i = 0; i < grid.points; ++i) c.energy[i] = grid.at(i);

  const double norm = 1.0 / (std::sqrt(2.0 * std::numbers::pi) * sigma);
  const double cutoff = 10.0 * sigma;
  const double step = grid.step();
  for (std::size_t k = 0; k < energies.size(); ++k) {
    if (!iprs.empty() && !(iprs[k] > threshold)) continue;
    ++c.state_count;
    const double e = energies[k];
    const auto lo = static_cast<long>(std::floor((e - cutoff - grid.emin) / step));
    const auto hi = static_cast<long>(std::ceil((e + cutoff - grid.emin) / step));
    for (long i = std::max(lo, 0L); i <= std::min(hi, static_cast<long>(grid.points) - 1); ++i) {
      const double x = (c.energy[static_cast<std::size_t>(i)] - e) / sigma;
      c.density[static_cast<std::size_t>(i)] += norm * std::exp(-0.5 * x * x);
    }
  }
  return c;
}

}  // namespace

DosCurve dos(std::span<const double> energies, const EnergyGrid& grid, double sigma) {
  if (energies.empty()) throw InvalidParameter("dos: empty energy list");
  return dos_impl(energies, {}, 0.0, grid, sigma);
}

DosCurve filtered_dos(std::span<const double> energies, std::span<const double> iprs, double threshold,
                      const EnergyGrid& grid, double sigma) {
  if (energies.size() != iprs.size()) throw InvalidParameter("filtered_dos: size mismatch");
  if (energies.empty()) throw InvalidParameter("filtered_dos: empty energy list");
  return dos_impl(energies, iprs, threshold, grid, sigma);
}

std::vector<double> level_spacing_weight(std::span<const double> energies, double floor) {
  const std::size_t n = energies.size();
  if (n < 3) throw InvalidParameter("level_spacing_weight: need at least three levels");
  if (!std::is_sorted(energies.begin(), energies.end()))
    throw InvalidParameter("level_spacing_weight: energies must be sorted ascending");
  std::vector<double> w(n);
  for (std::size_t i = 0; i < n; ++i) {
    double gap;
    if (i == 0) {
      gap = energies[1] - energies[0];
    } else if (i + 1 == n) {
      gap = energies[i] - energies[i - 1];
    } else {
      gap = std::min(energies[i + 1] - energies[i], energies[i] - energies[i - 1]);
    }
    w[i] = 1.0 / std::max(gap, floor);
  }
  return w;
}

std::vector<DegeneracyCluster> level_runs(std::span<const double> energies, double tol) {
  if (!(tol > 0.0)) throw InvalidParameter("degeneracy clusters: tolerance must be positive");
  std::vector<DegeneracyCluster> runs;
  std::size_t i = 0;
  while (i < energies.size()) {
    std::size_t j = i + 1;
    while (j < energies.size() && energies[j] - energies[j - 1] < tol) ++j;
    DegeneracyCluster c;
    c.first = i;
    c.count = j - i;
    double s = 0.0;
    for (std::size_t k = i; k < j; ++k) s += energies[k];
    c.mean = s / static_cast<double>(c.count);
    c.spread = energies[j - 1] - energies[i];
    runs.push_back(c);
    i = j;
  }
  return runs;
}

std::vector<DegeneracyCluster> degeneracy_clusters(std::span<const double> energies, double tol) {
  auto runs = level_runs(energies, tol);
  std::erase_if(runs, [](const DegeneracyCluster& c) { return c.count < 2; });
  return runs;
}

DegeneracyCluster find_flat_band(std::span<const double> energies, double target, double window, double tol) {
  const DegeneracyCluster* best = nullptr;
  const auto clusters = degeneracy_clusters(energies, tol);
  for (const auto& c : clusters) {
    if (std::abs(c.mean - target) > window) continue;
    if (best == nullptr || c.count > best->count ||
        (c.count == best->count && std::abs(c.mean - target) < std::abs(best->mean - target))) {
      best = &c;
    }
  }
  if (best == nullptr) {
    throw DetectionError("no degeneracy cluster within " + std::to_string(window) + " of E = " +
                         std::to_string(target));
  }
  return *best;
}

namespace {

// (n, m) on the zigzag cut (c, l); n may fall below 1 or m above N.
Pair cut_site(int c, int l) {
  const int s = 2 * c + (l % 2);
  return {(s - l) / 2, (s + l) / 2};
}

}  // namespace

std::vector<DecayProfile> relative_cuts(const TwoParticleAmplitude& psi, std::span<const int> com_positions) {
  const int big_n = psi.n_sites;
  const PairBasis basis(big_n);
  if (psi.psi.size() != basis.size()) throw InvalidParameter("relative_cuts: amplitude size does not match N");
  std::vector<DecayProfile> out;
  out.reserve(com_positions.size());
  for (int c : com_positions) {
    if (c < 1 || c > big_n - 1) {
      throw InvalidParameter("relative_cuts: center of mass " + std::to_string(c) + " outside 1.." +
                             std::to_string(big_n - 1));
    }
    DecayProfile p;
    p.com = c;
    for (int l = 1; l < big_n; ++l) {
      const auto [n, m] = cut_site(c, l);
      if (!basis.contains(n, m)) break;
      p.separation.push_back(l);
      p.amplitude.push_back(std::abs(psi.at(basis, n, m)));
    }
    out.push_back(std::move(p));
  }
  return out;
}

ZFit fit_z(const TwoParticleAmplitude& psi, const FitWindow& w) {
  const PairBasis basis(psi.n_sites);
  if (psi.psi.size() != basis.size()) throw FitError("fit_z: amplitude size does not match N");
  if (w.com_max <= w.com_min || w.sep_max < w.sep_min || w.sep_min < 1) {
    throw FitError("fit_z: window needs at least two centers and one separation");
  }
  double log_sum = 0.0;
  double log_min = HUGE_VAL;
  double log_max = -HUGE_VAL;
  int positive = 0;
  int negative = 0;
  std::size_t samples = 0;
  for (int l = w.sep_min; l <= w.sep_max; ++l) {
    std::vector<double> xs;
    std::vector<double> ys;
    double prev = 0.0;
    for (int c = w.com_min; c <= w.com_max; ++c) {
      const auto [n, m] = cut_site(c, l);
      if (!basis.contains(n, m)) throw FitError("fit_z: window leaves the lattice");
      const double a = psi.at(basis, n, m);
      if (!(std::abs(a) >= 1e-12)) throw FitError("fit_z: amplitude below 1e-12 in the window");
      if (c > w.com_min) (a / prev > 0.0 ? positive : negative) += 1;
      prev = a;
      xs.push_back(c);
      ys.push_back(std::log(std::abs(a)));
      ++samples;
    }
    double mx = 0.0;
    double my = 0.0;
    for (std::size_t k = 0; k < xs.size(); ++k) {
      mx += xs[k];
      my += ys[k];
    }
    mx /= static_cast<double>(xs.size());
    my /= static_cast<double>(xs.size());
    double sxx = 0.0;
    double sxy = 0.0;
    for (std::size_t k = 0; k < xs.size(); ++k) {
      sxx += (xs[k] - mx) * (xs[k] - mx);
      sxy += (xs[k] - mx) * (ys[k] - my);
    }
    if (!(sxx > 0.0)) throw FitError("fit_z: zero variance in center of mass");
    const double slope = sxy / sxx;
    log_sum += slope;
    log_min = std::min(log_min, slope);
    log_max = std::max(log_max, slope);
  }
  ZFit f;
  const double mean_log = log_sum / (w.sep_max - w.sep_min + 1);
  f.magnitude = std::exp(mean_log);
  f.sign = negative > positive ? -1.0 : 1.0;
  f.z = Complex(f.sign * f.magnitude, 0.0);
  f.slope_spread = log_max - log_min;
  f.samples = samples;
  return f;
}

double spectral_symmetry_defect(std::span<const double> energies) {
  double d = 0.0;
  const std::size_t n = energies.size();
  for (std::size_t i = 0; i < n; ++i) d = std::max(d, std::abs(energies[i] + energies[n - 1 - i]));
  return d;
}

std::size_t most_localized_state(std::span<const double> energies, std::span<const double> iprs, double target,
                                 double window) {
  if (energies.size() != iprs.size()) throw InvalidParameter("most_localized_state: size mismatch");
  std::size_t best = energies.size();
  for (std::size_t i = 0; i < energies.size(); ++i) {
    if (std::abs(energies[i] - target) > window) continue;
    if (best == energies.size() || iprs[i] > iprs[best]) best = i;
  }
  if (best == energies.size()) {
    throw DetectionError("no state within " + std::to_string(window) + " of E = " + std::to_string(target));
  }
  return best;
}

TwoParticleAmplitude localize_in_degenerate_subspace(const Spectrum& s, int n_sites, std::size_t index,
                                                     double tol) {
  if (index >= s.size()) throw InvalidParameter("localize_in_degenerate_subspace: index out of range");
  const PairBasis basis(n_sites);
  const std::size_t dim = basis.size();
  if (s.eigenvectors.rows() != dim) throw InvalidParameter("localize_in_degenerate_subspace: size mismatch");

  std::vector<std::size_t> members;
  for (std::size_t j = 0; j < s.size(); ++j)
    if (std::abs(s.eigenvalues[j] - s.eigenvalues[index]) < tol) members.push_back(j);
  const std::size_t k = members.size();

  RealMatrix x(k, k);
  for (std::size_t a = 0; a < k; ++a) {
    const auto va = s.eigenvectors.col(members[a]);
    for (std::size_t b = a; b < k; ++b) {
      const auto vb = s.eigenvectors.col(members[b]);
      double acc = 0.0;
      for (std::size_t i = 0; i < dim; ++i) acc += va[i] * static_cast<double>(basis[i].n + basis[i].m) * vb[i];
      x(a, b) = acc;
      x(b, a) = acc;
    }
  }
  const Spectrum rot = solvers::sym_eig(x);

  TwoParticleAmplitude best;
  double best_ipr = -1.0;
  std::vector<double> v(dim);
  for (std::size_t r = 0; r < k; ++r) {
    std::fill(v.begin(), v.end(), 0.0);
    for (std::size_t a = 0; a < k; ++a) {
      const auto va = s.eigenvectors.col(members[a]);
      const double c = rot.eigenvectors(a, r);
      for (std::size_t i = 0; i < dim; ++i) v[i] += c * va[i];
    }
    auto cand = TwoParticleAmplitude::normalized(n_sites, v);
    const double p = ipr(cand);
    if (p > best_ipr) {
      best_ipr = p;
      best = std::move(cand);
    }
  }
  return best;
}

}  // namespace pairlat
