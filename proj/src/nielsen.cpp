#include "entkit/nielsen.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "entkit/error.hpp"
#include "entkit/tolerances.hpp"

namespace entkit {

namespace {

// Partial-sum gaps at or below this are treated as closed.
constexpr double kGapZero = 1e-13;
constexpr double kPivotSeparation = 1e-14;
constexpr double kSpectrumMatch = 1e-8;

ComplexMatrix basis_projector(std::size_t m, std::size_t row, std::size_t col) {
  ComplexMatrix e(m, m);
  e(row, col) = 1.0;
  return e;
}

// Extends an M x M operator to n x n by fill * I on the complement, then
// rotates it into the given basis.
ComplexMatrix embed_operator(const ComplexMatrix& op, Complex fill, const ComplexMatrix& basis) {
  const std::size_t m = op.rows();
  const std::size_t n = basis.rows();
  ComplexMatrix block = ComplexMatrix::identity(n) * fill;
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) block(i, j) = op(i, j);
  return basis * block * basis.adjoint();
}

}  // namespace

NielsenProtocol synthesize(const ProbVector& p, const ProbVector& q, SynthesisOptions options) {
  const std::size_t m = std::max(p.size(), q.size());
  NielsenProtocol proto{p.padded(m), q.padded(m), {}};
  if (const auto k = first_violation(proto.target, proto.source)) {
    const auto gaps = partial_sum_gaps(proto.target, proto.source);
    throw NotConvertibleError(*k, gaps[*k - 1]);
  }

  std::vector<double> r(proto.source.values().begin(), proto.source.values().end());
  const auto& qv = proto.target.values();
  for (;;) {
    std::vector<double> gaps(m);
    double sr = 0.0, sq = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      sr += r[i];
      sq += qv[i];
      gaps[i] = sq - sr;
    }
    gaps[m - 1] = 0.0;

    std::size_t j = 0;
    while (j < m && gaps[j] <= kGapZero) ++j;
    if (j == m) break;
    std::size_t k = j + 1;
    while (gaps[k] > kGapZero) ++k;  // terminates: gaps[m-1] == 0
    double delta = *std::min_element(gaps.begin() + static_cast<std::ptrdiff_t>(j),
                                     gaps.begin() + static_cast<std::ptrdiff_t>(k));

    const double pj = r[j], pk = r[k];
    if (!(pk > 0.0)) throw InvariantError("synthesize: pivot coefficient p_K vanished");
    // When the smallest gap sits just before K, the step lands r_K on q_K.
    // Taking q_K directly keeps a zero target exactly zero; a rounding
    // residue there would enter the amplitudes as its square root.
    if (gaps[k - 1] - delta <= kGapZero) delta = pk - qv[k];
    const double rj = pj + delta;
    const double rk = std::max(0.0, pk - delta);
    if (!(rj - rk > kPivotSeparation)) throw InvariantError("synthesize: degenerate pivots r_J <= r_K");

    const double denom = rj * rj - rk * rk;
    const double c_scale = std::sqrt(std::max(0.0, (rj * pj - rk * pk) / denom));
    double d_scale = std::sqrt(std::max(0.0, (rj * pk - rk * pj) / denom));
    if (options.drop_d_prefactor) d_scale = 1.0;

    NielsenStep step;
    step.j = j;
    step.k = k;
    step.c_scale = c_scale;
    step.d_scale = d_scale;
    step.source = ProbVector(r);

    ComplexMatrix rest = ComplexMatrix::identity(m);
    rest(j, j) = 0.0;
    rest(k, k) = 0.0;
    step.c = (rest + basis_projector(m, j, j) * Complex(std::sqrt(rj / pj)) +
              basis_projector(m, k, k) * Complex(std::sqrt(rk / pk))) *
             Complex(c_scale);
    step.d = (rest + basis_projector(m, k, j) * Complex(std::sqrt(rk / pj)) +
              basis_projector(m, j, k) * Complex(std::sqrt(rj / pk))) *
             Complex(d_scale);
    step.u = ComplexMatrix::identity(m);
    step.v = rest + basis_projector(m, k, j) + basis_projector(m, j, k);

    r[j] = rj;
    r[k] = rk;
    // Clean rounding so the ordering invariant survives long chains.
    for (std::size_t i = 1; i < m; ++i) r[i] = std::min(r[i], r[i - 1]);
    step.result = ProbVector(r);
    proto.steps.push_back(std::move(step));
    if (proto.steps.size() >= m) throw InvariantError("synthesize: protocol exceeded M - 1 steps");
  }
  return proto;
}

double step_completeness_defect(const NielsenStep& step) {
  const auto gram = step.c.adjoint() * step.c + step.d.adjoint() * step.d;
  return frobenius_norm(gram - ComplexMatrix::identity(gram.rows()));
}

bool step_operators_unitary(const NielsenStep& step, double tol) {
  return is_unitary(step.u, tol) && is_unitary(step.v, tol);
}

SeparableChannel step_channel(const NielsenStep& step, const ComplexMatrix& basis_a, const ComplexMatrix& basis_b) {
  const std::size_t m = step.c.rows();
  if (basis_a.cols() < m || basis_b.cols() < m)
    throw DimensionError("step_channel: local spaces are smaller than the protocol length");
  const Dims dims{basis_a.rows(), basis_b.rows()};
  std::vector<SeparableChannel::Pair> pairs;
  pairs.push_back({embed_operator(step.c, step.c_scale, basis_a), embed_operator(step.u, 1.0, basis_b)});
  pairs.push_back({embed_operator(step.d, step.d_scale, basis_a), embed_operator(step.v, 1.0, basis_b)});
  return SeparableChannel(std::move(pairs), dims, dims);
}

OneWayLqccChannel step_as_one_way(const NielsenStep& step) {
  const std::size_t m = step.c.rows();
  return OneWayLqccChannel{Direction::alice_to_bob, {step.c, step.d}, {{step.u}, {step.v}}, {m, m}, {m, m}};
}

namespace {

SchmidtDecomposition checked_schmidt(const NielsenProtocol& proto, const PureBipartiteState& psi) {
  auto sd = schmidt(psi);
  const std::size_t m = proto.length();
  if (m > sd.coefficients.size())
    throw DimensionError("apply_protocol: protocol length " + std::to_string(m) +
                         " exceeds the state's Schmidt length " + std::to_string(sd.coefficients.size()));
  double err = 0.0;
  for (std::size_t i = 0; i < sd.coefficients.size(); ++i)
    err = std::max(err, std::abs(sd.coefficients[i] - proto.source.at_or_zero(i)));
  if (err > kSpectrumMatch)
    throw SpectrumMismatchError("apply_protocol: state spectrum differs from protocol source by " +
                                std::to_string(err));
  return sd;
}

}  // namespace

DensityOperator apply_protocol(const NielsenProtocol& proto, const PureBipartiteState& psi) {
  const auto sd = checked_schmidt(proto, psi);
  auto rho = psi.projector();
  for (const auto& step : proto.steps) rho = apply(step_channel(step, sd.basis_a, sd.basis_b), rho);
  return rho;
}

PureBipartiteState protocol_target(const NielsenProtocol& proto, const PureBipartiteState& psi) {
  const auto sd = checked_schmidt(proto, psi);
  std::vector<double> q(sd.coefficients.size());
  for (std::size_t i = 0; i < q.size(); ++i) q[i] = proto.target.at_or_zero(i);
  return state_from_schmidt(q, sd.basis_a, sd.basis_b);
}

Conversion plan_conversion(const PureBipartiteState& psi, const PureBipartiteState& phi) {
  if (psi.dim_a() != phi.dim_a() || psi.dim_b() != phi.dim_b())
    throw DimensionError("plan_conversion: states live on different spaces");
  const auto s_psi = schmidt(psi);
  const auto s_phi = schmidt(phi);
  Conversion out{synthesize(s_psi.spectrum(), s_phi.spectrum()), s_phi.basis_a * s_psi.basis_a.adjoint(),
                 s_phi.basis_b * s_psi.basis_b.adjoint()};
  return out;
}

DensityOperator run_conversion(const Conversion& conversion, const PureBipartiteState& psi) {
  const auto rho = apply_protocol(conversion.protocol, psi);
  const SeparableChannel rotate({{conversion.alice_unitary, conversion.bob_unitary}}, {psi.dim_a(), psi.dim_b()},
                                {psi.dim_a(), psi.dim_b()});
  return apply(rotate, rho);
}

bool convertible(const PureBipartiteState& psi, const PureBipartiteState& phi) {
  return majorizes(schmidt(phi).spectrum(), schmidt(psi).spectrum());
}

KrausChannel protocol_channel(const NielsenProtocol& proto) {
  const std::size_t m = proto.length();
  KrausChannel total = identity_channel({m, m});
  for (const auto& step : proto.steps) total = compose(total, flatten(step_as_one_way(step)));
  return total;
}

}  // namespace entkit
