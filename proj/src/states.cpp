#include "entkit/states.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "entkit/error.hpp"
#include "entkit/rng.hpp"
#include "entkit/tolerances.hpp"

namespace entkit {

namespace {

void require_dims(std::size_t dim_a, std::size_t dim_b, const char* who) {
  if (dim_a == 0 || dim_b == 0) throw DimensionError(std::string(who) + ": local dimensions must be at least 1");
}

bool lexicographically_less(const ComplexVector& a, const ComplexVector& b) {
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].real() != b[i].real()) return a[i].real() < b[i].real();
    if (a[i].imag() != b[i].imag()) return a[i].imag() < b[i].imag();
  }
  return false;
}

// Reorders (a1 b1)(a2 b2) into (a1 a2)(b1 b2) for a matrix acting on the
// four-factor composite space.
ComplexMatrix regroup(const ComplexMatrix& m, std::size_t a1, std::size_t b1, std::size_t a2, std::size_t b2) {
  const std::size_t n = a1 * b1 * a2 * b2;
  std::vector<std::size_t> to_new(n);
  for (std::size_t i1 = 0; i1 < a1; ++i1)
    for (std::size_t j1 = 0; j1 < b1; ++j1)
      for (std::size_t i2 = 0; i2 < a2; ++i2)
        for (std::size_t j2 = 0; j2 < b2; ++j2) {
          const std::size_t old_index = ((i1 * b1 + j1) * a2 + i2) * b2 + j2;
          const std::size_t new_index = ((i1 * a2 + i2) * b1 + j1) * b2 + j2;
          to_new[old_index] = new_index;
        }
  ComplexMatrix out(n, n);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c) out(to_new[r], to_new[c]) = m(r, c);
  return out;
}

}  // namespace

DensityOperator::DensityOperator(ComplexMatrix matrix, std::size_t dim_a, std::size_t dim_b)
    : matrix_(std::move(matrix)), dim_a_(dim_a), dim_b_(dim_b) {
  require_dims(dim_a, dim_b, "DensityOperator");
  const std::size_t n = dim_a * dim_b;
  if (matrix_.rows() != n || matrix_.cols() != n)
    throw DimensionError("DensityOperator: matrix is " + std::to_string(matrix_.rows()) + "x" +
                         std::to_string(matrix_.cols()) + ", expected " + std::to_string(n) + "-square");
  if (!is_hermitian(matrix_, tol::herm)) throw InvariantError("DensityOperator: matrix is not Hermitian");
  const double tr = matrix_.trace().real();
  if (std::abs(tr - 1.0) > tol::trace) throw InvariantError("DensityOperator: trace is " + std::to_string(tr));
  if (!is_positive_semidefinite(matrix_, tol::psd))
    throw InvariantError("DensityOperator: matrix has an eigenvalue below -tol_psd");
  // Store the exactly Hermitian part so downstream eigensolvers see clean input.
  for (std::size_t i = 0; i < n; ++i) {
    matrix_(i, i) = Complex(matrix_(i, i).real(), 0.0);
    for (std::size_t j = i + 1; j < n; ++j) {
      const Complex avg = 0.5 * (matrix_(i, j) + std::conj(matrix_(j, i)));
      matrix_(i, j) = avg;
      matrix_(j, i) = std::conj(avg);
    }
  }
}

DensityOperator DensityOperator::from_pure(const PureBipartiteState& psi) {
  const auto& v = psi.amplitudes();
  return DensityOperator(ComplexMatrix::outer(v, v), psi.dim_a(), psi.dim_b());
}

DensityOperator DensityOperator::maximally_mixed(std::size_t dim_a, std::size_t dim_b) {
  require_dims(dim_a, dim_b, "maximally_mixed");
  const std::size_t n = dim_a * dim_b;
  return DensityOperator(ComplexMatrix::identity(n) * Complex(1.0 / static_cast<double>(n)), dim_a, dim_b);
}

double DensityOperator::purity() const {
  double s = 0.0;
  for (const auto& x : matrix_.data()) s += std::norm(x);
  return s;
}

DensityOperator mark_separable(DensityOperator rho) {
  rho.separable_ = true;
  return rho;
}

PureBipartiteState::PureBipartiteState(ComplexVector amplitudes, std::size_t dim_a, std::size_t dim_b)
    : amplitudes_(std::move(amplitudes)), dim_a_(dim_a), dim_b_(dim_b) {
  require_dims(dim_a, dim_b, "PureBipartiteState");
  if (amplitudes_.size() != dim_a * dim_b)
    throw DimensionError("PureBipartiteState: " + std::to_string(amplitudes_.size()) + " amplitudes for dims " +
                         std::to_string(dim_a) + "x" + std::to_string(dim_b));
  for (const auto& x : amplitudes_)
    if (!std::isfinite(x.real()) || !std::isfinite(x.imag()))
      throw InvariantError("PureBipartiteState: non-finite amplitude");
  const double nv = norm(amplitudes_);
  if (std::abs(nv - 1.0) > tol::trace) throw InvariantError("PureBipartiteState: norm is " + std::to_string(nv));
}

ComplexMatrix PureBipartiteState::coefficient_matrix() const {
  return ComplexMatrix(dim_a_, dim_b_, amplitudes_);
}

std::size_t SchmidtDecomposition::rank() const {
  return static_cast<std::size_t>(
      std::count_if(coefficients.begin(), coefficients.end(), [](double p) { return p > 0.0; }));
}

SchmidtDecomposition schmidt(const PureBipartiteState& psi) {
  const auto sv = svd(psi.coefficient_matrix());
  const std::size_t m = sv.singular_values.size();

  std::vector<double> p(m);
  for (std::size_t k = 0; k < m; ++k) {
    const double s = sv.singular_values[k];
    p[k] = s * s <= tol::schmidt_cutoff ? 0.0 : s * s;
  }
  const double total = std::accumulate(p.begin(), p.end(), 0.0);
  for (auto& x : p) x /= total;

  // basis_b carries the conjugated right singular vectors so that
  // psi = sum_k sqrt(p_k) |a_k> (x) |b_k>.
  ComplexMatrix basis_a = sv.u;
  ComplexMatrix basis_b = sv.v.conj();

  // Deterministic order inside runs of equal coefficients.
  std::vector<std::size_t> order(m);
  std::iota(order.begin(), order.end(), 0);
  std::size_t start = 0;
  while (start < m) {
    std::size_t end = start + 1;
    while (end < m && std::abs(p[end] - p[start]) <= 1e-14) ++end;
    if (end - start > 1 && p[start] > 0.0) {
      std::stable_sort(order.begin() + static_cast<std::ptrdiff_t>(start),
                       order.begin() + static_cast<std::ptrdiff_t>(end), [&](std::size_t x, std::size_t y) {
                         return lexicographically_less(sv.u.col(x), sv.u.col(y));
                       });
    }
    start = end;
  }

  SchmidtDecomposition out;
  out.coefficients.resize(m);
  out.basis_a = basis_a;
  out.basis_b = basis_b;
  for (std::size_t k = 0; k < m; ++k) {
    out.coefficients[k] = p[order[k]];
    out.basis_a.set_col(k, basis_a.col(order[k]));
    out.basis_b.set_col(k, basis_b.col(order[k]));
  }
  for (std::size_t k = 1; k < m; ++k) out.coefficients[k] = std::min(out.coefficients[k], out.coefficients[k - 1]);
  return out;
}

PureBipartiteState state_from_schmidt(std::span<const double> probabilities, const ComplexMatrix& basis_a,
                                      const ComplexMatrix& basis_b) {
  const std::size_t da = basis_a.rows();
  const std::size_t db = basis_b.rows();
  if (probabilities.size() > basis_a.cols() || probabilities.size() > basis_b.cols())
    throw DimensionError("state_from_schmidt: more coefficients than basis vectors");
  ComplexVector amp(da * db);
  for (std::size_t k = 0; k < probabilities.size(); ++k) {
    if (probabilities[k] <= 0.0) continue;
    const double w = std::sqrt(probabilities[k]);
    for (std::size_t i = 0; i < da; ++i) {
      const Complex ai = w * basis_a(i, k);
      if (ai == Complex{}) continue;
      for (std::size_t j = 0; j < db; ++j) amp[i * db + j] += ai * basis_b(j, k);
    }
  }
  return PureBipartiteState(std::move(amp), da, db);
}

PureBipartiteState maximally_entangled(std::size_t d) {
  if (d == 0) throw PreconditionError("maximally_entangled: d must be at least 1");
  return canonical_state(ProbVector::uniform(d));
}

PureBipartiteState canonical_state(const ProbVector& p) {
  const std::size_t d = p.size();
  ComplexVector amp(d * d);
  for (std::size_t i = 0; i < d; ++i) amp[i * d + i] = std::sqrt(p[i]);
  return PureBipartiteState(std::move(amp), d, d);
}

PureBipartiteState product_state(std::span<const Complex> a, std::span<const Complex> b) {
  return PureBipartiteState(tensor(a, b), a.size(), b.size());
}

PureBipartiteState random_pure(std::size_t dim_a, std::size_t dim_b, std::uint64_t seed) {
  require_dims(dim_a, dim_b, "random_pure");
  Rng rng(seed);
  return PureBipartiteState(random_unit_vector(dim_a * dim_b, rng), dim_a, dim_b);
}

DensityOperator random_density(std::size_t dim_a, std::size_t dim_b, std::size_t rank, std::uint64_t seed) {
  require_dims(dim_a, dim_b, "random_density");
  const std::size_t n = dim_a * dim_b;
  if (rank == 0 || rank > n)
    throw PreconditionError("random_density: rank must lie in [1, " + std::to_string(n) + "]");
  Rng rng(seed);
  const auto v = random_unit_vector(n * rank, rng);
  const auto full = ComplexMatrix::outer(v, v);
  return DensityOperator(partial_trace(full, n, rank, Side::A), dim_a, dim_b);
}

DensityOperator separable_mixture(std::span<const ProductTerm> terms) {
  if (terms.empty()) throw PreconditionError("separable_mixture: no terms");
  const std::size_t da = terms.front().rho_a.rows();
  const std::size_t db = terms.front().rho_b.rows();
  double total = 0.0;
  ComplexMatrix sum(da * db, da * db);
  for (const auto& t : terms) {
    if (!(t.weight >= 0.0)) throw PreconditionError("separable_mixture: negative weight");
    if (t.rho_a.rows() != da || t.rho_b.rows() != db)
      throw DimensionError("separable_mixture: factor dimensions differ between terms");
    // Validate factors as single-party density operators.
    DensityOperator(t.rho_a, da, 1);
    DensityOperator(t.rho_b, 1, db);
    total += t.weight;
    sum += tensor(t.rho_a, t.rho_b) * Complex(t.weight);
  }
  if (std::abs(total - 1.0) > tol::trace)
    throw PreconditionError("separable_mixture: weights sum to " + std::to_string(total));
  return mark_separable(DensityOperator(std::move(sum), da, db));
}

DensityOperator random_separable(std::size_t dim_a, std::size_t dim_b, std::size_t terms, std::uint64_t seed) {
  require_dims(dim_a, dim_b, "random_separable");
  if (terms == 0) throw PreconditionError("random_separable: need at least one term");
  Rng rng(seed);
  const auto weights = random_simplex_point(terms, rng);
  std::vector<ProductTerm> parts;
  parts.reserve(terms);
  std::uniform_int_distribution<std::size_t> rank_a(1, dim_a);
  std::uniform_int_distribution<std::size_t> rank_b(1, dim_b);
  for (std::size_t t = 0; t < terms; ++t) {
    const auto ra = random_density(dim_a, 1, rank_a(rng), rng());
    const auto rb = random_density(1, dim_b, rank_b(rng), rng());
    parts.push_back({weights[t], ra.matrix(), rb.matrix()});
  }
  return separable_mixture(parts);
}

PureBipartiteState apply_local_unitaries(const PureBipartiteState& psi, const ComplexMatrix& u,
                                         const ComplexMatrix& v) {
  if (u.rows() != psi.dim_a() || u.cols() != psi.dim_a() || v.rows() != psi.dim_b() || v.cols() != psi.dim_b())
    throw DimensionError("apply_local_unitaries: operator dimensions do not match the state");
  // (U (x) V) psi corresponds to U M V^T on the coefficient matrix.
  const auto m = u * psi.coefficient_matrix() * v.transpose();
  return PureBipartiteState(ComplexVector(m.data().begin(), m.data().end()), psi.dim_a(), psi.dim_b());
}

PureBipartiteState bipartite_tensor(const PureBipartiteState& psi, const PureBipartiteState& phi) {
  const std::size_t a1 = psi.dim_a(), b1 = psi.dim_b(), a2 = phi.dim_a(), b2 = phi.dim_b();
  ComplexVector amp(a1 * a2 * b1 * b2);
  const auto& x = psi.amplitudes();
  const auto& y = phi.amplitudes();
  for (std::size_t i1 = 0; i1 < a1; ++i1)
    for (std::size_t j1 = 0; j1 < b1; ++j1) {
      const Complex xv = x[i1 * b1 + j1];
      if (xv == Complex{}) continue;
      for (std::size_t i2 = 0; i2 < a2; ++i2)
        for (std::size_t j2 = 0; j2 < b2; ++j2)
          amp[((i1 * a2 + i2) * b1 + j1) * b2 + j2] = xv * y[i2 * b2 + j2];
    }
  return PureBipartiteState(std::move(amp), a1 * a2, b1 * b2);
}

DensityOperator bipartite_tensor(const DensityOperator& rho, const DensityOperator& sigma) {
  auto joint = regroup(tensor(rho.matrix(), sigma.matrix()), rho.dim_a(), rho.dim_b(), sigma.dim_a(), sigma.dim_b());
  DensityOperator out(std::move(joint), rho.dim_a() * sigma.dim_a(), rho.dim_b() * sigma.dim_b());
  if (rho.separable_by_construction() && sigma.separable_by_construction()) return mark_separable(std::move(out));
  return out;
}

PureBipartiteState tensor_power(const PureBipartiteState& psi, std::size_t n) {
  PureBipartiteState out(ComplexVector{Complex(1.0)}, 1, 1);
  for (std::size_t k = 0; k < n; ++k) out = bipartite_tensor(out, psi);
  return out;
}

PureBipartiteState embed(const PureBipartiteState& psi, std::size_t dim_a, std::size_t dim_b) {
  if (dim_a < psi.dim_a() || dim_b < psi.dim_b()) throw DimensionError("embed: target dimensions are smaller");
  ComplexVector amp(dim_a * dim_b);
  for (std::size_t i = 0; i < psi.dim_a(); ++i)
    for (std::size_t j = 0; j < psi.dim_b(); ++j) amp[i * dim_b + j] = psi.amplitudes()[i * psi.dim_b() + j];
  return PureBipartiteState(std::move(amp), dim_a, dim_b);
}

double trace_distance(const DensityOperator& rho, const DensityOperator& sigma) {
  if (rho.dim() != sigma.dim()) throw DimensionError("trace_distance: dimension mismatch");
  return trace_norm_hermitian(rho.matrix() - sigma.matrix());
}

double trace_distance(const PureBipartiteState& psi, const PureBipartiteState& phi) {
  if (psi.amplitudes().size() != phi.amplitudes().size()) throw DimensionError("trace_distance: dimension mismatch");
  // 1 - |<psi|phi>|^2 = (1 - r)(1 + r) with 1 - r = |psi - e^{i theta} phi|^2 / 2 for
  // the optimal phase; this avoids the cancellation in 1 - r^2 for close states.
  const auto& x = psi.amplitudes();
  const auto& y = phi.amplitudes();
  const double nx = norm(x);
  const double ny = norm(y);
  const Complex c = inner(x, y) / (nx * ny);
  const double r = std::min(1.0, std::abs(c));
  const Complex phase = r > 0.0 ? std::conj(c) / std::abs(c) : Complex(1.0);
  double diff = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) diff += std::norm(x[i] / nx - phase * y[i] / ny);
  const double one_minus_r = std::min(1.0, 0.5 * diff);
  return 2.0 * std::sqrt(std::max(0.0, one_minus_r * (1.0 + r)));
}

}  // namespace entkit
