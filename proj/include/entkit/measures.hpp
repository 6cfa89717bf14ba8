#pragma once

// Entropies and entanglement measures. All values are in bits.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "entkit/kernels.hpp"
#include "entkit/majorization.hpp"
#include "entkit/states.hpp"

namespace entkit {

/// -sum p log2 p with 0 log 0 = 0; entries below tol::log_clamp count as 0.
double shannon_entropy(std::span<const double> p);
double von_neumann_entropy(const DensityOperator& rho);
/// Same for a raw Hermitian matrix (e.g. a reduced operator).
double von_neumann_entropy(const ComplexMatrix& rho);

/// Entropy of either reduced state of a pure state.
double reduced_entropy(const PureBipartiteState& psi);
/// log2 of the Schmidt rank.
double renyi_zero(const PureBipartiteState& psi);
/// -log2 of the largest Schmidt coefficient.
double renyi_inf(const PureBipartiteState& psi);
double entanglement_formation_pure(const PureBipartiteState& psi);

/// tr rho log2 rho - tr rho log2 sigma; +infinity when the support of rho
/// is not contained in that of sigma.
double relative_entropy(const DensityOperator& rho, const DensityOperator& sigma);
double relative_entropy(const ComplexMatrix& rho, const ComplexMatrix& sigma);

/// Measures with a closed form on pure states.
enum class PureMeasure { svn, s0, sinf, ef_pure };
std::string_view to_string(PureMeasure m);
double evaluate(PureMeasure m, const SchmidtSpectrum& spectrum);
double evaluate(PureMeasure m, const PureBipartiteState& psi);

struct SandwichBounds {
  double f;  // S(rho_A) - S(rho)
  double g;  // S(rho_A)
};
SandwichBounds sandwich_bounds(const DensityOperator& rho);

/// t log2(dim) - t log2(t) with t = ||sigma - rho||_1. Throws
/// PreconditionError when t > 1/3 or the dimensions differ.
double fannes_bound(const DensityOperator& rho, const DensityOperator& sigma);

// ---------------------------------------------------------------------------
// Optimizer-backed measures for mixed states.

struct OptimizerBudget {
  std::size_t restarts = 4;
  std::size_t iterations = 100;
  std::uint64_t seed = 0;
  kernels::Execution execution = kernels::Execution::parallel;
};

enum class ReportKind { exact, upper_bound };
std::string_view to_string(ReportKind k);

struct OptimizerInfo {
  std::size_t restarts;
  std::size_t iterations;
  std::uint64_t seed;
};

struct MeasureReport {
  std::string measure;
  double value = 0.0;
  ReportKind kind = ReportKind::exact;
  std::optional<OptimizerInfo> optimizer;
};

/// One term w |a><a| (x) |b><b| of a separable state.
struct ProductAtom {
  double weight;
  ComplexVector a;
  ComplexVector b;
};

/// A separable state given explicitly by its atoms.
struct SeparableWitness {
  std::size_t dim_a = 0;
  std::size_t dim_b = 0;
  std::vector<ProductAtom> atoms;

  ComplexMatrix matrix() const;
  /// Atom-wise tensor product, regrouped as (A1 A2)(B1 B2).
  friend SeparableWitness tensor(const SeparableWitness& x, const SeparableWitness& y);
};

SeparableWitness mix(double lambda, const SeparableWitness& x, const SeparableWitness& y);

struct ErResult {
  MeasureReport report;
  SeparableWitness witness;  // S(rho || witness) == report.value
  /// Frank-Wolfe gap at the witness, computed with a heuristic linear
  /// oracle; a small value indicates near-optimality, it is not a certificate.
  double gap = 0.0;
};

/// Relative entropy of entanglement, as an upper bound from a pairwise
/// Frank-Wolfe search over mixtures of product states. Candidates in
/// `warm_starts` are refined alongside the seeded restarts.
ErResult relative_entropy_entanglement(const DensityOperator& rho, const OptimizerBudget& budget = {},
                                       std::span<const SeparableWitness> warm_starts = {});

/// rho = sum w_i |psi_i><psi_i|.
struct PureDecomposition {
  std::vector<double> weights;
  std::vector<PureBipartiteState> states;

  double average_entropy() const;
  ComplexMatrix matrix() const;
};

struct EfResult {
  MeasureReport report;
  PureDecomposition decomposition;  // average entropy == report.value
};

/// Entanglement of formation. Rank-one input returns the exact value;
/// otherwise an upper bound from Givens-rotation search over purifications.
/// Warm starts must decompose rho.
EfResult entanglement_formation_mixed(const DensityOperator& rho, const OptimizerBudget& budget = {},
                                      std::span<const PureDecomposition> warm_starts = {});

}  // namespace entkit
