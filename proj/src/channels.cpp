#include "entkit/channels.hpp"

#include <cmath>
#include <numeric>
#include <string>

#include "entkit/error.hpp"
#include "entkit/kernels.hpp"
#include "entkit/nielsen.hpp"
#include "entkit/rng.hpp"
#include "entkit/tolerances.hpp"

namespace entkit {

namespace {

std::string shape(std::size_t r, std::size_t c) { return std::to_string(r) + "x" + std::to_string(c); }

ComplexMatrix gram_sum(const std::vector<ComplexMatrix>& ops, std::size_t dim) {
  ComplexMatrix s(dim, dim);
  for (const auto& w : ops) s += w.adjoint() * w;
  return s;
}

void require_complete(const ComplexMatrix& gram, const char* who) {
  const double defect = frobenius_norm(gram - ComplexMatrix::identity(gram.rows()));
  if (defect > tol::channel)
    throw InvariantError(std::string(who) + ": completeness defect " + std::to_string(defect) +
                         " exceeds tol_channel");
}

// Maps a composite index over (x1 y1)(x2 y2) to (x1 x2)(y1 y2).
std::vector<std::size_t> regroup_map(Dims first, Dims second) {
  std::vector<std::size_t> map(first.total() * second.total());
  for (std::size_t i1 = 0; i1 < first.a; ++i1)
    for (std::size_t j1 = 0; j1 < first.b; ++j1)
      for (std::size_t i2 = 0; i2 < second.a; ++i2)
        for (std::size_t j2 = 0; j2 < second.b; ++j2)
          map[((i1 * first.b + j1) * second.a + i2) * second.b + j2] =
              ((i1 * second.a + i2) * first.b + j1) * second.b + j2;
  return map;
}

// Kraus blocks of a random isometry from C^in into C^(out * count).
std::vector<ComplexMatrix> isometry_blocks(std::size_t in, std::size_t out, std::size_t count, Rng& rng) {
  if (out * count < in) throw PreconditionError("random channel: too few Kraus operators for an isometry");
  const auto u = random_unitary(out * count, rng);
  std::vector<ComplexMatrix> ops(count, ComplexMatrix(out, in));
  for (std::size_t t = 0; t < count; ++t)
    for (std::size_t r = 0; r < out; ++r)
      for (std::size_t c = 0; c < in; ++c) ops[t](r, c) = u(t * out + r, c);
  return ops;
}

}  // namespace

KrausChannel::KrausChannel(std::vector<ComplexMatrix> ops, Dims in, Dims out, Normalization normalization)
    : ops_(std::move(ops)), in_(in), out_(out), normalization_(normalization) {
  if (in.total() == 0 || out.total() == 0) throw DimensionError("KrausChannel: zero dimension");
  if (ops_.empty()) throw InvariantError("KrausChannel: no Kraus operators");
  for (const auto& w : ops_)
    if (w.rows() != out.total() || w.cols() != in.total())
      throw DimensionError("KrausChannel: operator is " + shape(w.rows(), w.cols()) + ", expected " +
                           shape(out.total(), in.total()));
  const auto gram = gram_sum(ops_, in.total());
  if (normalization == Normalization::trace_preserving) {
    require_complete(gram, "KrausChannel");
  } else if (!is_positive_semidefinite(ComplexMatrix::identity(in.total()) - gram, tol::channel)) {
    throw InvariantError("KrausChannel: sum of W^dagger W exceeds the identity");
  }
}

double KrausChannel::completeness_defect() const {
  return frobenius_norm(gram_sum(ops_, dim_in()) - ComplexMatrix::identity(dim_in()));
}

ComplexMatrix apply(const KrausChannel& channel, const ComplexMatrix& b) {
  if (b.rows() != channel.dim_in() || b.cols() != channel.dim_in())
    throw DimensionError("apply: input is " + shape(b.rows(), b.cols()) + ", channel expects " +
                         shape(channel.dim_in(), channel.dim_in()));
  ComplexMatrix out(channel.dim_out(), channel.dim_out());
  for (const auto& w : channel.ops()) out += w * b * w.adjoint();
  return out;
}

DensityOperator apply(const KrausChannel& channel, const DensityOperator& rho) {
  if (channel.normalization() != Normalization::trace_preserving)
    throw PreconditionError("apply: a trace-decreasing operation does not map states to states");
  if (Dims{rho.dim_a(), rho.dim_b()}.total() != channel.dim_in()) throw DimensionError("apply: dimension mismatch");
  return DensityOperator(apply(channel, rho.matrix()), channel.out().a, channel.out().b);
}

KrausChannel compose(const KrausChannel& first, const KrausChannel& second) {
  if (first.dim_out() != second.dim_in()) throw DimensionError("compose: output and input dimensions differ");
  std::vector<ComplexMatrix> ops;
  ops.reserve(first.ops().size() * second.ops().size());
  for (const auto& a : first.ops())
    for (const auto& b : second.ops()) ops.push_back(b * a);
  const bool preserving = first.normalization() == Normalization::trace_preserving &&
                          second.normalization() == Normalization::trace_preserving;
  return KrausChannel(std::move(ops), first.in(), second.out(),
                      preserving ? Normalization::trace_preserving : Normalization::trace_nonincreasing);
}

KrausChannel bipartite_tensor(const KrausChannel& x, const KrausChannel& y) {
  const auto row_map = regroup_map(x.out(), y.out());
  const auto col_map = regroup_map(x.in(), y.in());
  std::vector<ComplexMatrix> ops;
  for (const auto& kx : x.ops())
    for (const auto& ky : y.ops()) {
      const auto k = tensor(kx, ky);
      ComplexMatrix regrouped(k.rows(), k.cols());
      for (std::size_t r = 0; r < k.rows(); ++r)
        for (std::size_t c = 0; c < k.cols(); ++c) regrouped(row_map[r], col_map[c]) = k(r, c);
      ops.push_back(std::move(regrouped));
    }
  const bool preserving = x.normalization() == Normalization::trace_preserving &&
                          y.normalization() == Normalization::trace_preserving;
  return KrausChannel(std::move(ops), {x.in().a * y.in().a, x.in().b * y.in().b},
                      {x.out().a * y.out().a, x.out().b * y.out().b},
                      preserving ? Normalization::trace_preserving : Normalization::trace_nonincreasing);
}

KrausChannel convex_combination(std::span<const double> weights, std::span<const KrausChannel> channels) {
  if (weights.size() != channels.size() || channels.empty())
    throw PreconditionError("convex_combination: need one weight per channel");
  const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
  if (std::abs(total - 1.0) > tol::trace)
    throw PreconditionError("convex_combination: weights sum to " + std::to_string(total));
  std::vector<ComplexMatrix> ops;
  for (std::size_t i = 0; i < channels.size(); ++i) {
    if (weights[i] < 0.0) throw PreconditionError("convex_combination: negative weight");
    if (channels[i].in() != channels.front().in() || channels[i].out() != channels.front().out())
      throw DimensionError("convex_combination: channel dimensions differ");
    if (weights[i] == 0.0) continue;
    const Complex s(std::sqrt(weights[i]));
    for (const auto& w : channels[i].ops()) ops.push_back(w * s);
  }
  return KrausChannel(std::move(ops), channels.front().in(), channels.front().out());
}

KrausChannel identity_channel(Dims dims) {
  return KrausChannel({ComplexMatrix::identity(dims.total())}, dims, dims);
}

KrausChannel elementary_add_ancilla(std::size_t system_dim, const ComplexMatrix& sigma) {
  const std::size_t k = sigma.rows();
  const DensityOperator ancilla(sigma, k, 1);
  const auto es = hermitian_eig(ancilla.matrix());
  std::vector<ComplexMatrix> ops;
  for (std::size_t m = 0; m < k; ++m) {
    if (es.eigenvalues[m] <= 0.0) continue;
    const auto e = ComplexMatrix::column(es.eigenvectors.col(m));
    ops.push_back(tensor(ComplexMatrix::identity(system_dim), e) * Complex(std::sqrt(es.eigenvalues[m])));
  }
  return KrausChannel(std::move(ops), {system_dim, 1}, {system_dim, k});
}

KrausChannel elementary_trace_out(Dims dims, Side traced) {
  const std::size_t kept = traced == Side::B ? dims.a : dims.b;
  const std::size_t gone = traced == Side::B ? dims.b : dims.a;
  std::vector<ComplexMatrix> ops;
  for (std::size_t j = 0; j < gone; ++j) {
    ComplexMatrix bra(1, gone);
    bra(0, j) = 1.0;
    ops.push_back(traced == Side::B ? tensor(ComplexMatrix::identity(kept), bra)
                                    : tensor(bra, ComplexMatrix::identity(kept)));
  }
  return KrausChannel(std::move(ops), dims, {kept, 1});
}

KrausChannel elementary_unitary(const ComplexMatrix& u, Dims dims) {
  if (!is_unitary(u, tol::channel)) throw InvariantError("elementary_unitary: operator is not unitary");
  return KrausChannel({u}, dims, dims);
}

KrausChannel flatten(const OneWayLqccChannel& channel) {
  const bool alice_first = channel.direction == Direction::alice_to_bob;
  const std::size_t first_in = alice_first ? channel.in.a : channel.in.b;
  const std::size_t second_in = alice_first ? channel.in.b : channel.in.a;
  if (channel.first_ops.empty() || channel.second_ops.size() != channel.first_ops.size())
    throw DimensionError("flatten: need one second-party instrument per first-party outcome");
  require_complete(gram_sum(channel.first_ops, first_in), "flatten (first party)");
  std::vector<ComplexMatrix> ops;
  for (std::size_t i = 0; i < channel.first_ops.size(); ++i) {
    if (channel.second_ops[i].empty()) throw DimensionError("flatten: empty second-party instrument");
    require_complete(gram_sum(channel.second_ops[i], second_in), "flatten (second party)");
    for (const auto& s : channel.second_ops[i])
      ops.push_back(alice_first ? tensor(channel.first_ops[i], s) : tensor(s, channel.first_ops[i]));
  }
  return KrausChannel(std::move(ops), channel.in, channel.out);
}

SeparableChannel::SeparableChannel(std::vector<Pair> pairs, Dims in, Dims out)
    : pairs_(std::move(pairs)), in_(in), out_(out) {
  if (pairs_.empty()) throw InvariantError("SeparableChannel: no operators");
  ComplexMatrix gram(in.total(), in.total());
  for (const auto& p : pairs_) {
    if (p.alice.rows() != out.a || p.alice.cols() != in.a || p.bob.rows() != out.b || p.bob.cols() != in.b)
      throw DimensionError("SeparableChannel: local operator shape mismatch");
    gram += tensor(p.alice.adjoint() * p.alice, p.bob.adjoint() * p.bob);
  }
  require_complete(gram, "SeparableChannel");
}

KrausChannel flatten(const SeparableChannel& channel) {
  std::vector<ComplexMatrix> ops;
  ops.reserve(channel.pairs().size());
  for (const auto& p : channel.pairs()) ops.push_back(tensor(p.alice, p.bob));
  return KrausChannel(std::move(ops), channel.in(), channel.out());
}

ComplexMatrix apply(const SeparableChannel& channel, const ComplexMatrix& b) {
  ComplexMatrix out(channel.out().total(), channel.out().total());
  for (const auto& p : channel.pairs())
    out += kernels::conjugate_local(b, channel.in().a, channel.in().b, p.alice, p.bob);
  return out;
}

DensityOperator apply(const SeparableChannel& channel, const DensityOperator& rho) {
  if (rho.dim_a() != channel.in().a || rho.dim_b() != channel.in().b)
    throw DimensionError("apply: state dimensions do not match the channel");
  return DensityOperator(apply(channel, rho.matrix()), channel.out().a, channel.out().b);
}

KrausChannel random_channel(Dims in, Dims out, std::size_t kraus_count, std::uint64_t seed) {
  Rng rng(seed);
  return KrausChannel(isometry_blocks(in.total(), out.total(), kraus_count, rng), in, out);
}

SeparableChannel random_local_channel(Dims in, Dims out, std::size_t kraus_a, std::size_t kraus_b,
                                      std::uint64_t seed) {
  Rng rng(seed);
  const auto alice = isometry_blocks(in.a, out.a, kraus_a, rng);
  const auto bob = isometry_blocks(in.b, out.b, kraus_b, rng);
  std::vector<SeparableChannel::Pair> pairs;
  for (const auto& a : alice)
    for (const auto& b : bob) pairs.push_back({a, b});
  return SeparableChannel(std::move(pairs), in, out);
}

KrausChannel replace_with_product(Dims in, std::span<const Complex> phi_a, std::span<const Complex> phi_b) {
  const double na = norm(phi_a), nb = norm(phi_b);
  if (std::abs(na - 1.0) > tol::trace || std::abs(nb - 1.0) > tol::trace)
    throw InvariantError("replace_with_product: target factors must be unit vectors");
  // Each party discards its input in an orthonormal basis and prepares its
  // factor: Kraus operators |phi_a><i| (x) |phi_b><j|.
  std::vector<SeparableChannel::Pair> pairs;
  for (std::size_t i = 0; i < in.a; ++i) {
    ComplexVector ei(in.a);
    ei[i] = 1.0;
    for (std::size_t j = 0; j < in.b; ++j) {
      ComplexVector ej(in.b);
      ej[j] = 1.0;
      pairs.push_back({ComplexMatrix::outer(phi_a, ei), ComplexMatrix::outer(phi_b, ej)});
    }
  }
  return flatten(SeparableChannel(std::move(pairs), in, {phi_a.size(), phi_b.size()}));
}

KrausChannel prepare_from_maxent(const DensityOperator& rho) {
  const std::size_t da = rho.dim_a(), db = rho.dim_b();
  const std::size_t d = std::min(da, db);
  const auto es = hermitian_eig(rho.matrix());

  std::vector<double> weights;
  std::vector<KrausChannel> branches;
  for (std::size_t k = 0; k < es.eigenvalues.size(); ++k) {
    const double lambda = es.eigenvalues[k];
    if (lambda <= tol::log_clamp) continue;
    const PureBipartiteState component(es.eigenvectors.col(k), da, db);
    const auto sd = schmidt(component);
    const auto proto = synthesize(ProbVector::uniform(d), sd.spectrum());
    // The protocol leaves sum sqrt(q_m)|mm>; the local isometries |m> -> |a_m>
    // and |m> -> |b_m> move it onto the eigenvector.
    ComplexMatrix iso_a(da, d), iso_b(db, d);
    for (std::size_t m = 0; m < d; ++m) {
      iso_a.set_col(m, sd.basis_a.col(m));
      iso_b.set_col(m, sd.basis_b.col(m));
    }
    const KrausChannel embed_channel({tensor(iso_a, iso_b)}, {d, d}, {da, db});
    branches.push_back(compose(protocol_channel(proto), embed_channel));
    weights.push_back(lambda);
  }
  const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
  for (auto& w : weights) w /= total;
  return convex_combination(weights, branches);
}

}  // namespace entkit
