#include "pairlat/ssh.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "pairlat/error.hpp"
#include "pairlat/parallel.hpp"

namespace pairlat {

void SSHParams::validate() const {
  if (n_cells < 2) throw InvalidParameter("SSH chain needs at least two cells");
  if (!std::isfinite(t1) || !std::isfinite(t2)) throw InvalidParameter("SSH hoppings must be finite");
  if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) throw InvalidParameter("z must be finite");
  if (z == Complex{}) throw InvalidParameter("z must be nonzero");
}

ComplexMatrix build_ssh_matrix(const SSHParams& p) {
  p.validate();
  const auto cells = static_cast<std::size_t>(p.n_cells);
  ComplexMatrix h(2 * cells, 2 * cells);
  const Complex a_to_b = p.t2 + p.t1 / p.z;
  const Complex b_to_a = p.t2 + p.t1 * p.z;
  const Complex a_to_prev_b = p.t1 + p.t2 / p.z;
  const Complex b_to_next_a = p.t1 + p.t2 * p.z;
  for (std::size_t n = 0; n < cells; ++n) {
    const std::size_t a = 2 * n;
    const std::size_t b = 2 * n + 1;
    h(a, b) = a_to_b;
    h(b, a) = b_to_a;
    if (n > 0) h(a, b - 2) = a_to_prev_b;
    if (n + 1 < cells) h(b, a + 2) = b_to_next_a;
  }
  return h;
}

Complex bulk_h(const SSHParams& p, double kappa) {
  const Complex e = std::polar(1.0, kappa);
  return (p.t2 + p.t1 / p.z + (p.t1 + p.t2 / p.z) / e) * (p.t2 + p.t1 * p.z + (p.t1 + p.t2 * p.z) * e);
}

std::array<Complex, 2> bulk_energy(const SSHParams& p, double kappa) {
  const Complex e = std::sqrt(bulk_h(p, kappa));
  return {e, -e};
}

WindingResult winding_number(const SSHParams& p, std::size_t samples) {
  p.validate();
  if (samples < 256) throw InvalidParameter("winding_number needs at least 256 samples");
  WindingResult r;
  const double gap_tol = 1e-12 * (std::abs(p.t1) + std::abs(p.t2)) * (std::abs(p.t1) + std::abs(p.t2));
  double phase = 0.0;
  Complex prev = bulk_h(p, -std::numbers::pi);
  r.min_abs_h = std::abs(prev);
  for (std::size_t i = 1; i <= samples; ++i) {
    const double kappa = -std::numbers::pi + 2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(samples);
    const Complex h = bulk_h(p, kappa);
    r.min_abs_h = std::min(r.min_abs_h, std::abs(h));
    phase += std::arg(h / prev);
    prev = h;
  }
  r.gap_closed = !(r.min_abs_h >= gap_tol);
  r.winding = r.gap_closed ? 0 : static_cast<int>(std::lround(phase / (2.0 * std::numbers::pi)));
  return r;
}

Complex skin_ratio(const SSHParams& p) {
  p.validate();
  const Complex den = p.t2 * p.z + p.t1;
  if (std::abs(den) == 0.0) throw InvalidParameter("skin_ratio: t2 z + t1 vanishes");
  return (p.t1 * p.z + p.t2) / den;
}

double localization_parameter(const SSHParams& p) {
  const ComplexSpectrum s = solvers::complex_eig(build_ssh_matrix(p));
  const std::size_t d = s.eigenvalues.size();
  const std::size_t last_b = d - 1;
  double acc = 0.0;
  for (std::size_t j = 0; j < d; ++j) {
    acc += std::norm(s.eigenvectors(0, j)) - std::norm(s.eigenvectors(last_b, j));
  }
  return acc / static_cast<double>(d);
}

LocalizationMap localization_map(double t1, std::span<const double> ratios, std::span<const Complex> zs,
                                 int n_cells, unsigned threads) {
  if (ratios.empty() || zs.empty()) throw InvalidParameter("localization_map: empty grid");
  LocalizationMap map;
  map.z.assign(zs.begin(), zs.end());
  map.ratio.assign(ratios.begin(), ratios.end());
  map.value = RealMatrix(zs.size(), ratios.size());
  map.gap_closed = Matrix<int>(zs.size(), ratios.size());
  const std::size_t cols = ratios.size();
  parallel_for(zs.size() * cols, threads, [&](std::size_t k) {
    const std::size_t i = k / cols;
    const std::size_t j = k % cols;
    const SSHParams p{t1, t1 * ratios[j], zs[i], n_cells};
    if (winding_number(p).gap_closed) {
      map.gap_closed(i, j) = 1;
      return;
    }
    map.value(i, j) = localization_parameter(p);
  });
  return map;
}

std::vector<Complex> default_z_grid(std::size_t per_side) {
  if (per_side < 2) throw InvalidParameter("z grid needs at least two points per side");
  std::vector<Complex> zs;
  const double step = (2.0 - 0.05) / static_cast<double>(per_side - 1);
  for (std::size_t i = 0; i < per_side; ++i) zs.emplace_back(-2.0 + step * static_cast<double>(i), 0.0);
  for (std::size_t i = 0; i < per_side; ++i) zs.emplace_back(0.05 + step * static_cast<double>(i), 0.0);
  return zs;
}

}  // namespace pairlat
