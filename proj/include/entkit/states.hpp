#pragma once

// Bipartite states: density operators, pure states, Schmidt decomposition
// and seeded samplers.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "entkit/linalg.hpp"
#include "entkit/majorization.hpp"

namespace entkit {

using SchmidtSpectrum = ProbVector;

class PureBipartiteState;

/// Positive unit-trace Hermitian operator on C^dimA (x) C^dimB.
class DensityOperator {
 public:
  /// Throws DimensionError / InvariantError when the invariants fail.
  DensityOperator(ComplexMatrix matrix, std::size_t dim_a, std::size_t dim_b);

  static DensityOperator from_pure(const PureBipartiteState& psi);
  static DensityOperator maximally_mixed(std::size_t dim_a, std::size_t dim_b);

  const ComplexMatrix& matrix() const noexcept { return matrix_; }
  std::size_t dim_a() const noexcept { return dim_a_; }
  std::size_t dim_b() const noexcept { return dim_b_; }
  std::size_t dim() const noexcept { return dim_a_ * dim_b_; }

  ComplexMatrix reduced(Side keep) const { return partial_trace(matrix_, dim_a_, dim_b_, keep); }
  double purity() const;

  /// Set only by separable_mixture().
  bool separable_by_construction() const noexcept { return separable_; }

 private:
  friend DensityOperator mark_separable(DensityOperator rho);
  ComplexMatrix matrix_;
  std::size_t dim_a_;
  std::size_t dim_b_;
  bool separable_ = false;
};

DensityOperator mark_separable(DensityOperator rho);

/// Unit vector in C^dimA (x) C^dimB.
class PureBipartiteState {
 public:
  PureBipartiteState(ComplexVector amplitudes, std::size_t dim_a, std::size_t dim_b);

  const ComplexVector& amplitudes() const noexcept { return amplitudes_; }
  std::size_t dim_a() const noexcept { return dim_a_; }
  std::size_t dim_b() const noexcept { return dim_b_; }

  /// dimA x dimB coefficient matrix M with psi = sum M_ij |i>|j>.
  ComplexMatrix coefficient_matrix() const;
  DensityOperator projector() const { return DensityOperator::from_pure(*this); }

 private:
  ComplexVector amplitudes_;
  std::size_t dim_a_;
  std::size_t dim_b_;
};

struct SchmidtDecomposition {
  /// Squared Schmidt amplitudes, descending, length min(dimA, dimB).
  std::vector<double> coefficients;
  /// Full unitary bases; the first coefficients.size() columns pair up.
  ComplexMatrix basis_a;
  ComplexMatrix basis_b;

  SchmidtSpectrum spectrum() const { return SchmidtSpectrum(coefficients); }
  std::size_t rank() const;
};

SchmidtDecomposition schmidt(const PureBipartiteState& psi);

/// sum_m sqrt(p_m) |basis_a[:,m]> (x) |basis_b[:,m]>
PureBipartiteState state_from_schmidt(std::span<const double> probabilities, const ComplexMatrix& basis_a,
                                      const ComplexMatrix& basis_b);

/// Canonical representative sum_i |ii>/sqrt(d) on C^d (x) C^d.
PureBipartiteState maximally_entangled(std::size_t d);
/// sum_m sqrt(p_m) |mm> on C^d (x) C^d with d = p.size().
PureBipartiteState canonical_state(const ProbVector& p);
PureBipartiteState product_state(std::span<const Complex> a, std::span<const Complex> b);

PureBipartiteState random_pure(std::size_t dim_a, std::size_t dim_b, std::uint64_t seed);
DensityOperator random_density(std::size_t dim_a, std::size_t dim_b, std::size_t rank, std::uint64_t seed);

struct ProductTerm {
  double weight;
  ComplexMatrix rho_a;
  ComplexMatrix rho_b;
};

/// sum_i r_i rho^A_i (x) rho^B_i, flagged separable by construction.
DensityOperator separable_mixture(std::span<const ProductTerm> terms);

/// Random separable state: a mixture of `terms` products of random local
/// states of rank up to the local dimension.
DensityOperator random_separable(std::size_t dim_a, std::size_t dim_b, std::size_t terms, std::uint64_t seed);

/// (U (x) V) psi
PureBipartiteState apply_local_unitaries(const PureBipartiteState& psi, const ComplexMatrix& u, const ComplexMatrix& v);

/// psi (x) phi regrouped as (A1 A2) | (B1 B2).
PureBipartiteState bipartite_tensor(const PureBipartiteState& psi, const PureBipartiteState& phi);
DensityOperator bipartite_tensor(const DensityOperator& rho, const DensityOperator& sigma);
PureBipartiteState tensor_power(const PureBipartiteState& psi, std::size_t n);

/// Embeds psi into larger local spaces via the inclusion maps.
PureBipartiteState embed(const PureBipartiteState& psi, std::size_t dim_a, std::size_t dim_b);

/// Trace-norm distance ||rho - sigma||_1 (no factor 1/2).
double trace_distance(const DensityOperator& rho, const DensityOperator& sigma);
/// 2 sqrt(1 - |<psi|phi>|^2)
double trace_distance(const PureBipartiteState& psi, const PureBipartiteState& phi);

}  // namespace entkit
