#pragma once

// Two distinguishable particles on an open chain of N sites. Particle 1 hops
// with t1, particle 2 with t2, and they repel on contact with strength U.
// In the hard-core limit (U -> infinity) the ordering of the particles is
// conserved and the problem lives on the ordered pairs n < m.

#include <cstddef>
#include <span>
#include <utility>
#include <variant>
#include <vector>

#include "pairlat/dense.hpp"
#include "pairlat/solvers.hpp"

namespace pairlat {

struct HardCore {};
struct FiniteU {
  double u = 0.0;
};
using Interaction = std::variant<HardCore, FiniteU>;

/// Lattice size, on-site energies, hoppings and interaction mode. t1 is the energy unit.
struct ModelParams {
  int n_sites = 101;
  double t1 = 1.0;
  double t2 = 0.4;
  double eps1 = 0.0;
  double eps2 = 0.0;
  Interaction interaction = HardCore{};

  bool hard_core() const noexcept { return std::holds_alternative<HardCore>(interaction); }

  /// Throws InvalidParameter unless N >= 2, t1 != 0 and all values are finite.
  void validate() const;
};

/// Site labels of a pair, 1-based as on the lattice: particle 1 at n, particle 2 at m.
struct Pair {
  int n;
  int m;
  friend bool operator==(const Pair&, const Pair&) = default;
};

/// Ordered pairs (n, m), 1 <= n < m <= N, in lexicographic order.
class PairBasis {
 public:
  explicit PairBasis(int n_sites);

  int n_sites() const noexcept { return n_sites_; }
  std::size_t size() const noexcept { return pairs_.size(); }
  const std::vector<Pair>& pairs() const noexcept { return pairs_; }
  const Pair& operator[](std::size_t i) const { return pairs_[i]; }

  bool contains(int n, int m) const noexcept {
    return n >= 1 && m <= n_sites_ && n < m;
  }
  /// Linear index of (n, m); the pair must be in the basis.
  std::size_t index(int n, int m) const;

 private:
  int n_sites_;
  std::vector<Pair> pairs_;
};

/// Entry of a sparse matrix in coordinate form.
struct MatrixEntry {
  std::size_t row;
  std::size_t col;
  double value;
};

/// Real sparse matrix stored row-compressed. Built from coordinate entries;
/// duplicates are summed.
class SparseHamiltonian {
 public:
  SparseHamiltonian(std::size_t dimension, std::vector<MatrixEntry> entries);

  std::size_t dimension() const noexcept { return dimension_; }
  std::size_t nonzeros() const noexcept { return cols_.size(); }
  bool symmetric() const noexcept { return symmetric_; }

  /// Number of stored off-diagonal entries in row i.
  std::size_t row_degree(std::size_t i) const;
  /// max |i - j| over stored entries.
  std::size_t bandwidth() const noexcept { return bandwidth_; }
  double trace() const;
  std::vector<MatrixEntry> entries() const;

  /// y = H x
  void multiply(std::span<const double> x, std::span<double> y) const;

  RealMatrix to_dense() const;
  /// Upper band in LAPACK column-major storage (see solvers::sym_band_eigenvalues).
  std::vector<double> to_upper_band() const;

 private:
  std::size_t dimension_;
  std::vector<std::size_t> row_start_;
  std::vector<std::size_t> cols_;
  std::vector<double> values_;
  bool symmetric_ = true;
  std::size_t bandwidth_ = 0;
};

/// Normalized two-particle amplitudes psi_nm on the ordered-pair basis.
struct TwoParticleAmplitude {
  int n_sites = 0;
  std::vector<double> psi;

  /// Copies `values`, rescaling to unit norm. Throws InvalidParameter on a zero vector.
  static TwoParticleAmplitude normalized(int n_sites, std::span<const double> values);

  double at(const PairBasis& basis, int n, int m) const { return psi[basis.index(n, m)]; }
  double norm_squared() const;
};

/// Basis of the finite-U oracle: all N^2 site pairs, index (n - 1) * N + (m - 1).
std::size_t full_pair_index(int n_sites, int n, int m);

/// Hard-core Hamiltonian on the ordered-pair basis. Hops into n = m are projected out.
SparseHamiltonian build_hardcore_hamiltonian(const ModelParams& params);

/// Finite-U Hamiltonian on all N^2 configurations of the two distinguishable particles.
SparseHamiltonian build_finite_u_hamiltonian(const ModelParams& params);

/// Full eigendecomposition with a sparse residual check against H.
/// Throws SymmetryError for an asymmetric H and ConvergenceError when the
/// residual exceeds 1e-9 * max|E|.
Spectrum solve_spectrum(const SparseHamiltonian& h);

/// Sorted eigenvalues only, from a banded reduction of H. Much cheaper than
/// solve_spectrum when the eigenvectors are not needed.
std::vector<double> solve_eigenvalues(const SparseHamiltonian& h);

/// Hard-core spectrum recovered from the finite-U oracle: the N highest
/// levels (doubly occupied sites, ~U) are dropped and the remaining 2M levels,
/// which pair up between the n < m and n > m orderings, are averaged in pairs.
std::vector<double> finite_u_sector_eigenvalues(const ModelParams& params);

/// max_j ||H v_j - E_j v_j||_2 computed with the sparse matrix.
double sparse_residual(const SparseHamiltonian& h, const Spectrum& s);

/// Amplitude of eigenvector `index` of a hard-core spectrum.
TwoParticleAmplitude eigenstate(const Spectrum& s, int n_sites, std::size_t index);

}  // namespace pairlat
