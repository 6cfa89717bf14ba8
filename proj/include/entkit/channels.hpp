#pragma once

// Quantum operations in Kraus form and the structured local subclasses:
// one-way LQCC instruments and separable operations.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "entkit/linalg.hpp"
#include "entkit/states.hpp"

namespace entkit {

/// Local factor dimensions of a bipartite space. Plain (non-bipartite)
/// spaces use {n, 1}.
struct Dims {
  std::size_t a = 1;
  std::size_t b = 1;
  std::size_t total() const noexcept { return a * b; }
  bool operator==(const Dims&) const = default;
};

enum class Normalization { trace_preserving, trace_nonincreasing };

/// A completely positive map B -> sum_i W_i B W_i^dagger.
class KrausChannel {
 public:
  /// Throws DimensionError on shape mismatches and InvariantError when the
  /// completeness relation fails by more than tol::channel.
  KrausChannel(std::vector<ComplexMatrix> ops, Dims in, Dims out,
               Normalization normalization = Normalization::trace_preserving);

  const std::vector<ComplexMatrix>& ops() const noexcept { return ops_; }
  Dims in() const noexcept { return in_; }
  Dims out() const noexcept { return out_; }
  std::size_t dim_in() const noexcept { return in_.total(); }
  std::size_t dim_out() const noexcept { return out_.total(); }
  Normalization normalization() const noexcept { return normalization_; }

  /// || sum W^dagger W - I ||_F
  double completeness_defect() const;

 private:
  std::vector<ComplexMatrix> ops_;
  Dims in_;
  Dims out_;
  Normalization normalization_;
};

ComplexMatrix apply(const KrausChannel& channel, const ComplexMatrix& b);
DensityOperator apply(const KrausChannel& channel, const DensityOperator& rho);

/// `second` after `first`; Kraus operators are all products B_j A_i.
KrausChannel compose(const KrausChannel& first, const KrausChannel& second);
/// Channel on the regrouped space (A1 A2) | (B1 B2).
KrausChannel bipartite_tensor(const KrausChannel& x, const KrausChannel& y);
/// sum_i w_i Lambda_i with operators sqrt(w_i) W.
KrausChannel convex_combination(std::span<const double> weights, std::span<const KrausChannel> channels);

KrausChannel identity_channel(Dims dims);

/// rho -> rho (x) sigma; the ancilla becomes the B factor of the output.
KrausChannel elementary_add_ancilla(std::size_t system_dim, const ComplexMatrix& sigma);
/// Partial trace over the given side; the remaining factor is reported as {d, 1}.
KrausChannel elementary_trace_out(Dims dims, Side traced);
/// rho -> U rho U^dagger
KrausChannel elementary_unitary(const ComplexMatrix& u, Dims dims);

enum class Direction { alice_to_bob, bob_to_alice };

/// The first party applies an instrument {F_i}; after learning i the second
/// party applies the instrument {S_ji}. Either instrument is complete.
struct OneWayLqccChannel {
  Direction direction = Direction::alice_to_bob;
  std::vector<ComplexMatrix> first_ops;
  std::vector<std::vector<ComplexMatrix>> second_ops;  // second_ops[i] follows outcome i
  Dims in;
  Dims out;
};

/// Kraus operators (F_i (x) S_ji) in the A (x) B ordering; validated.
KrausChannel flatten(const OneWayLqccChannel& channel);

/// sum_i (V_i (x) W_i) sigma (V_i (x) W_i)^dagger
class SeparableChannel {
 public:
  struct Pair {
    ComplexMatrix alice;
    ComplexMatrix bob;
  };
  SeparableChannel(std::vector<Pair> pairs, Dims in, Dims out);

  const std::vector<Pair>& pairs() const noexcept { return pairs_; }
  Dims in() const noexcept { return in_; }
  Dims out() const noexcept { return out_; }

 private:
  std::vector<Pair> pairs_;
  Dims in_;
  Dims out_;
};

KrausChannel flatten(const SeparableChannel& channel);
/// Applies the local pairs without forming Kronecker products.
ComplexMatrix apply(const SeparableChannel& channel, const ComplexMatrix& b);
DensityOperator apply(const SeparableChannel& channel, const DensityOperator& rho);

/// Random trace-preserving channel with `kraus_count` operators (blocks of a
/// Haar-random isometry).
KrausChannel random_channel(Dims in, Dims out, std::size_t kraus_count, std::uint64_t seed);

/// Product of independent random local channels on each side; every Kraus
/// pair is (A_i, B_j).
SeparableChannel random_local_channel(Dims in, Dims out, std::size_t kraus_a, std::size_t kraus_b,
                                      std::uint64_t seed);

/// Local replacement channel: every input goes to |phi_a (x) phi_b><...|.
KrausChannel replace_with_product(Dims in, std::span<const Complex> phi_a, std::span<const Complex> phi_b);

/// Channel mapping the canonical maximally entangled state on d x d,
/// d = min(dimA, dimB), to rho: a mixture of Nielsen conversions onto the
/// eigenvectors of rho followed by local isometries.
KrausChannel prepare_from_maxent(const DensityOperator& rho);

}  // namespace entkit
