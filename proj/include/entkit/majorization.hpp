#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "entkit/rng.hpp"

namespace entkit {

/// Probability vector sorted in descending order.
class ProbVector {
 public:
  ProbVector() = default;
  /// Throws InvariantError unless values are sorted descending, nonnegative
  /// (entries above -1e-15 are clamped to zero) and sum to 1 within tol::trace.
  explicit ProbVector(std::vector<double> values);
  static ProbVector from_unsorted(std::vector<double> values);
  static ProbVector uniform(std::size_t d);

  std::span<const double> values() const noexcept { return values_; }
  std::size_t size() const noexcept { return values_.size(); }
  double operator[](std::size_t i) const { return values_[i]; }
  double at_or_zero(std::size_t i) const { return i < values_.size() ? values_[i] : 0.0; }

  ProbVector padded(std::size_t n) const;
  /// Drops entries at or below cutoff from the tail.
  ProbVector trimmed(double cutoff = 0.0) const;
  std::size_t support_size(double cutoff) const;

  bool operator==(const ProbVector&) const = default;

 private:
  std::vector<double> values_;
};

/// q majorizes p: every partial sum of q dominates that of p up to tol::major.
bool majorizes(const ProbVector& q, const ProbVector& p);

/// delta_k = sum_{m<=k} q_m - sum_{m<=k} p_m, k = 1..M over the zero-padded
/// common length M.
std::vector<double> partial_sum_gaps(const ProbVector& q, const ProbVector& p);

/// 1-based index of the first partial sum with delta_k < -tol::major.
std::optional<std::size_t> first_violation(const ProbVector& q, const ProbVector& p);

/// sum_i w_i Pi_i(q) for `permutations` random permutations Pi_i and
/// random convex weights; the result is majorized by q.
ProbVector bistochastic_mix(const ProbVector& q, std::size_t permutations, Rng& rng);

/// Random point of the simplex, sorted descending.
ProbVector random_prob_vector(std::size_t d, Rng& rng);

}  // namespace entkit
