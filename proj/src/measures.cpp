#include "entkit/measures.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "entkit/error.hpp"
#include "entkit/tolerances.hpp"

namespace entkit {

namespace {

// Weight of rho on a null direction of sigma above which the support
// condition counts as violated.
constexpr double kSupportLeak = 1e-12;

}  // namespace

double shannon_entropy(std::span<const double> p) {
  double h = 0.0;
  for (double x : p)
    if (x > tol::log_clamp) h -= x * std::log2(x);
  return h;
}

double von_neumann_entropy(const ComplexMatrix& rho) {
  const auto ev = hermitian_eigenvalues(rho);
  return shannon_entropy(ev);
}

double von_neumann_entropy(const DensityOperator& rho) { return von_neumann_entropy(rho.matrix()); }

double reduced_entropy(const PureBipartiteState& psi) { return shannon_entropy(schmidt(psi).coefficients); }

double renyi_zero(const PureBipartiteState& psi) { return evaluate(PureMeasure::s0, schmidt(psi).spectrum()); }

double renyi_inf(const PureBipartiteState& psi) { return evaluate(PureMeasure::sinf, schmidt(psi).spectrum()); }

double entanglement_formation_pure(const PureBipartiteState& psi) { return reduced_entropy(psi); }

double relative_entropy(const ComplexMatrix& rho, const ComplexMatrix& sigma) {
  if (rho.rows() != sigma.rows() || !rho.is_square() || !sigma.is_square())
    throw DimensionError("relative_entropy: dimension mismatch");
  const double neg_entropy = -von_neumann_entropy(rho);
  const auto es = hermitian_eig(sigma);
  double cross = 0.0;
  for (std::size_t k = 0; k < es.eigenvalues.size(); ++k) {
    const auto v = es.eigenvectors.col(k);
    const double weight = inner(v, rho * v).real();
    const double mu = es.eigenvalues[k];
    if (mu <= tol::log_clamp) {
      if (weight > kSupportLeak) return std::numeric_limits<double>::infinity();
      continue;
    }
    cross -= weight * std::log2(mu);
  }
  return neg_entropy + cross;
}

double relative_entropy(const DensityOperator& rho, const DensityOperator& sigma) {
  return relative_entropy(rho.matrix(), sigma.matrix());
}

std::string_view to_string(PureMeasure m) {
  switch (m) {
    case PureMeasure::svn: return "svn";
    case PureMeasure::s0: return "s0";
    case PureMeasure::sinf: return "sinf";
    case PureMeasure::ef_pure: return "ef_pure";
  }
  return "?";
}

double evaluate(PureMeasure m, const SchmidtSpectrum& spectrum) {
  switch (m) {
    case PureMeasure::svn:
    case PureMeasure::ef_pure:
      return shannon_entropy(spectrum.values());
    case PureMeasure::s0:
      return std::log2(static_cast<double>(spectrum.support_size(0.0)));
    case PureMeasure::sinf:
      return -std::log2(spectrum[0]);
  }
  throw PreconditionError("evaluate: unknown measure");
}

double evaluate(PureMeasure m, const PureBipartiteState& psi) { return evaluate(m, schmidt(psi).spectrum()); }

SandwichBounds sandwich_bounds(const DensityOperator& rho) {
  const double sa = von_neumann_entropy(rho.reduced(Side::A));
  return {sa - von_neumann_entropy(rho), sa};
}

double fannes_bound(const DensityOperator& rho, const DensityOperator& sigma) {
  if (rho.dim() != sigma.dim()) throw DimensionError("fannes_bound: dimension mismatch");
  const double t = trace_distance(rho, sigma);
  if (t > 1.0 / 3.0) throw PreconditionError("fannes_bound: trace distance " + std::to_string(t) + " exceeds 1/3");
  const double eta = t > 0.0 ? -t * std::log2(t) : 0.0;
  return t * std::log2(static_cast<double>(rho.dim())) + eta;
}

std::string_view to_string(ReportKind k) { return k == ReportKind::exact ? "exact" : "upper_bound"; }

ComplexMatrix SeparableWitness::matrix() const {
  const std::size_t n = dim_a * dim_b;
  ComplexMatrix sigma(n, n);
  for (const auto& atom : atoms) {
    const auto v = entkit::tensor(atom.a, atom.b);
    for (std::size_t i = 0; i < n; ++i) {
      const Complex vi = atom.weight * v[i];
      if (vi == Complex{}) continue;
      for (std::size_t j = 0; j < n; ++j) sigma(i, j) += vi * std::conj(v[j]);
    }
  }
  return sigma;
}

SeparableWitness tensor(const SeparableWitness& x, const SeparableWitness& y) {
  SeparableWitness out{x.dim_a * y.dim_a, x.dim_b * y.dim_b, {}};
  out.atoms.reserve(x.atoms.size() * y.atoms.size());
  for (const auto& s : x.atoms)
    for (const auto& t : y.atoms)
      out.atoms.push_back({s.weight * t.weight, entkit::tensor(s.a, t.a), entkit::tensor(s.b, t.b)});
  return out;
}

SeparableWitness mix(double lambda, const SeparableWitness& x, const SeparableWitness& y) {
  if (x.dim_a != y.dim_a || x.dim_b != y.dim_b) throw DimensionError("mix: witness dimensions differ");
  SeparableWitness out{x.dim_a, x.dim_b, {}};
  for (const auto& a : x.atoms) out.atoms.push_back({lambda * a.weight, a.a, a.b});
  for (const auto& a : y.atoms) out.atoms.push_back({(1.0 - lambda) * a.weight, a.a, a.b});
  return out;
}

double PureDecomposition::average_entropy() const {
  double s = 0.0;
  for (std::size_t i = 0; i < states.size(); ++i) s += weights[i] * reduced_entropy(states[i]);
  return s;
}

ComplexMatrix PureDecomposition::matrix() const {
  if (states.empty()) return {};
  const std::size_t n = states.front().amplitudes().size();
  ComplexMatrix out(n, n);
  for (std::size_t i = 0; i < states.size(); ++i)
    out += ComplexMatrix::outer(states[i].amplitudes(), states[i].amplitudes()) * Complex(weights[i]);
  return out;
}

}  // namespace entkit
