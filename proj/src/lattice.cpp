#include "pairlat/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "pairlat/error.hpp"

namespace pairlat {

void ModelParams::validate() const {
  if (n_sites < 2) throw InvalidParameter("n_sites must be >= 2, got " + std::to_string(n_sites));
  if (!std::isfinite(t1) || t1 == 0.0) throw InvalidParameter("t1 must be finite and nonzero");
  if (!std::isfinite(t2)) throw InvalidParameter("t2 must be finite");
  if (!std::isfinite(eps1) || !std::isfinite(eps2)) throw InvalidParameter("site energies must be finite");
  if (const auto* f = std::get_if<FiniteU>(&interaction); f && !std::isfinite(f->u)) {
    throw InvalidParameter("U must be finite in FiniteU mode");
  }
}

PairBasis::PairBasis(int n_sites) : n_sites_(n_sites) {
  if (n_sites < 2) throw InvalidParameter("pair basis needs N >= 2, got " + std::to_string(n_sites));
  pairs_.reserve(static_cast<std::size_t>(n_sites) * (n_sites - 1) / 2);
  for (int n = 1; n <= n_sites; ++n)
    for (int m = n + 1; m <= n_sites; ++m) pairs_.push_back({n, m});
}

std::size_t PairBasis::index(int n, int m) const {
  if (!contains(n, m)) {
    throw InvalidParameter("pair (" + std::to_string(n) + ", " + std::to_string(m) +
                           ") is not in the basis");
  }
  const auto nn = static_cast<std::size_t>(n);
  const auto big_n = static_cast<std::size_t>(n_sites_);
  return (nn - 1) * (2 * big_n - nn) / 2 + static_cast<std::size_t>(m - n - 1);
}

SparseHamiltonian::SparseHamiltonian(std::size_t dimension, std::vector<MatrixEntry> entries)
    : dimension_(dimension), row_start_(dimension + 1, 0) {
  for (const auto& e : entries) {
    if (e.row >= dimension || e.col >= dimension) throw InvalidParameter("sparse entry out of range");
  }
  std::sort(entries.begin(), entries.end(), [](const MatrixEntry& a, const MatrixEntry& b) {
    return a.row != b.row ? a.row < b.row : a.col < b.col;
  });
  for (std::size_t k = 0; k < entries.size(); ++k) {
    const auto& e = entries[k];
    if (!cols_.empty() && k > 0 && entries[k - 1].row == e.row && entries[k - 1].col == e.col) {
      values_.back() += e.value;
      continue;
    }
    cols_.push_back(e.col);
    values_.push_back(e.value);
    ++row_start_[e.row + 1];
    bandwidth_ = std::max(bandwidth_, e.row > e.col ? e.row - e.col : e.col - e.row);
  }
  for (std::size_t i = 0; i < dimension; ++i) row_start_[i + 1] += row_start_[i];

  auto lookup = [this](std::size_t i, std::size_t j) -> const double* {
    const auto first = cols_.begin() + static_cast<std::ptrdiff_t>(row_start_[i]);
    const auto last = cols_.begin() + static_cast<std::ptrdiff_t>(row_start_[i + 1]);
    const auto it = std::lower_bound(first, last, j);
    if (it == last || *it != j) return nullptr;
    return &values_[static_cast<std::size_t>(it - cols_.begin())];
  };
  for (std::size_t i = 0; i < dimension && symmetric_; ++i) {
    for (std::size_t k = row_start_[i]; k < row_start_[i + 1]; ++k) {
      const double* mirror = lookup(cols_[k], i);
      const double v = mirror ? *mirror : 0.0;
      if (v != values_[k]) {
        symmetric_ = false;
        break;
      }
    }
  }
}

std::size_t SparseHamiltonian::row_degree(std::size_t i) const {
  std::size_t d = 0;
  for (std::size_t k = row_start_.at(i); k < row_start_[i + 1]; ++k)
    if (cols_[k] != i) ++d;
  return d;
}

double SparseHamiltonian::trace() const {
  double t = 0.0;
  for (std::size_t i = 0; i < dimension_; ++i)
    for (std::size_t k = row_start_[i]; k < row_start_[i + 1]; ++k)
      if (cols_[k] == i) t += values_[k];
  return t;
}

std::vector<MatrixEntry> SparseHamiltonian::entries() const {
  std::vector<MatrixEntry> out;
  out.reserve(cols_.size());
  for (std::size_t i = 0; i < dimension_; ++i)
    for (std::size_t k = row_start_[i]; k < row_start_[i + 1]; ++k) out.push_back({i, cols_[k], values_[k]});
  return out;
}

void SparseHamiltonian::multiply(std::span<const double> x, std::span<double> y) const {
  if (x.size() != dimension_ || y.size() != dimension_) throw InvalidParameter("multiply: size mismatch");
  for (std::size_t i = 0; i < dimension_; ++i) {
    double acc = 0.0;
    for (std::size_t k = row_start_[i]; k < row_start_[i + 1]; ++k) acc += values_[k] * x[cols_[k]];
    y[i] = acc;
  }
}

RealMatrix SparseHamiltonian::to_dense() const {
  RealMatrix a(dimension_, dimension_);
  for (std::size_t i = 0; i < dimension_; ++i)
    for (std::size_t k = row_start_[i]; k < row_start_[i + 1]; ++k) a(i, cols_[k]) = values_[k];
  return a;
}

std::vector<double> SparseHamiltonian::to_upper_band() const {
  const std::size_t kd = bandwidth_;
  std::vector<double> band((kd + 1) * dimension_, 0.0);
  for (std::size_t i = 0; i < dimension_; ++i) {
    for (std::size_t k = row_start_[i]; k < row_start_[i + 1]; ++k) {
      const std::size_t j = cols_[k];
      if (j < i) continue;
      band[(kd + i - j) + j * (kd + 1)] = values_[k];
    }
  }
  return band;
}

TwoParticleAmplitude TwoParticleAmplitude::normalized(int n_sites, std::span<const double> values) {
  double s = 0.0;
  for (double v : values) s += v * v;
  if (!(s > 0.0) || !std::isfinite(s)) throw InvalidParameter("amplitude vector is zero or not finite");
  const double inv = 1.0 / std::sqrt(s);
  TwoParticleAmplitude a;
  a.n_sites = n_sites;
  a.psi.reserve(values.size());
  for (double v : values) a.psi.push_back(v * inv);
  return a;
}

double TwoParticleAmplitude::norm_squared() const {
  double s = 0.0;
  for (double v : psi) s += v * v;
  return s;
}

std::size_t full_pair_index(int n_sites, int n, int m) {
  return static_cast<std::size_t>(n - 1) * static_cast<std::size_t>(n_sites) + static_cast<std::size_t>(m - 1);
}

SparseHamiltonian build_hardcore_hamiltonian(const ModelParams& params) {
  params.validate();
  if (!params.hard_core()) throw ModeError("build_hardcore_hamiltonian needs HardCore interaction");
  const PairBasis basis(params.n_sites);
  const double diag = params.eps1 + params.eps2;
  std::vector<MatrixEntry> entries;
  entries.reserve(basis.size() * 5);
  for (std::size_t i = 0; i < basis.size(); ++i) {
    const auto [n, m] = basis[i];
    entries.push_back({i, i, diag});
    if (params.t1 != 0.0) {
      if (basis.contains(n - 1, m)) entries.push_back({i, basis.index(n - 1, m), params.t1});
      if (basis.contains(n + 1, m)) entries.push_back({i, basis.index(n + 1, m), params.t1});
    }
    if (params.t2 != 0.0) {
      if (basis.contains(n, m - 1)) entries.push_back({i, basis.index(n, m - 1), params.t2});
      if (basis.contains(n, m + 1)) entries.push_back({i, basis.index(n, m + 1), params.t2});
    }
  }
  return SparseHamiltonian(basis.size(), std::move(entries));
}

SparseHamiltonian build_finite_u_hamiltonian(const ModelParams& params) {
  params.validate();
  const auto* fu = std::get_if<FiniteU>(&params.interaction);
  if (fu == nullptr) throw ModeError("build_finite_u_hamiltonian needs FiniteU interaction");
  const int big_n = params.n_sites;
  const auto dim = static_cast<std::size_t>(big_n) * static_cast<std::size_t>(big_n);
  std::vector<MatrixEntry> entries;
  entries.reserve(dim * 5);
  for (int n = 1; n <= big_n; ++n) {
    for (int m = 1; m <= big_n; ++m) {
      const std::size_t i = full_pair_index(big_n, n, m);
      entries.push_back({i, i, params.eps1 + params.eps2 + (n == m ? fu->u : 0.0)});
      if (params.t1 != 0.0) {
        if (n > 1) entries.push_back({i, full_pair_index(big_n, n - 1, m), params.t1});
        if (n < big_n) entries.push_back({i, full_pair_index(big_n, n + 1, m), params.t1});
      }
      if (params.t2 != 0.0) {
        if (m > 1) entries.push_back({i, full_pair_index(big_n, n, m - 1), params.t2});
        if (m < big_n) entries.push_back({i, full_pair_index(big_n, n, m + 1), params.t2});
      }
    }
  }
  return SparseHamiltonian(dim, std::move(entries));
}

double sparse_residual(const SparseHamiltonian& h, const Spectrum& s) {
  const std::size_t n = h.dimension();
  std::vector<double> y(n);
  double worst = 0.0;
  for (std::size_t j = 0; j < s.eigenvalues.size(); ++j) {
    const auto v = s.eigenvectors.col(j);
    h.multiply(v, y);
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double d = y[i] - s.eigenvalues[j] * v[i];
      acc += d * d;
    }
    worst = std::max(worst, std::sqrt(acc));
  }
  return worst;
}

Spectrum solve_spectrum(const SparseHamiltonian& h) {
  if (!h.symmetric()) throw SymmetryError("solve_spectrum: Hamiltonian is not symmetric");
  Spectrum s = solvers::sym_eig_unverified(h.to_dense());
  s.residual = sparse_residual(h, s);
  const double scale = s.max_abs_eigenvalue();
  if (scale > 0.0 && !(s.residual <= 1e-9 * scale)) {
    throw ConvergenceError("solve_spectrum: residual " + std::to_string(s.residual) +
                               " exceeds 1e-9 * max|E| = " + std::to_string(1e-9 * scale),
                           0, s.residual);
  }
  return s;
}

std::vector<double> solve_eigenvalues(const SparseHamiltonian& h) {
  if (!h.symmetric()) throw SymmetryError("solve_eigenvalues: Hamiltonian is not symmetric");
  auto w = solvers::sym_band_eigenvalues(h.dimension(), h.bandwidth(), h.to_upper_band());
  std::sort(w.begin(), w.end());
  return w;
}

std::vector<double> finite_u_sector_eigenvalues(const ModelParams& params) {
  const auto h = build_finite_u_hamiltonian(params);
  const auto w = solve_eigenvalues(h);
  const auto big_n = static_cast<std::size_t>(params.n_sites);
  const std::size_t m = big_n * (big_n - 1) / 2;
  std::vector<double> out(m);
  for (std::size_t i = 0; i < m; ++i) out[i] = 0.5 * (w[2 * i] + w[2 * i + 1]);
  return out;
}

TwoParticleAmplitude eigenstate(const Spectrum& s, int n_sites, std::size_t index) {
  if (index >= s.eigenvalues.size()) throw InvalidParameter("eigenstate index out of range");
  return TwoParticleAmplitude::normalized(n_sites, s.eigenvectors.col(index));
}

}  // namespace pairlat
