#include "entkit/majorization.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <string>

#include "entkit/error.hpp"
#include "entkit/tolerances.hpp"

namespace entkit {

ProbVector::ProbVector(std::vector<double> values) : values_(std::move(values)) {
  double sum = 0.0;
  for (std::size_t i = 0; i < values_.size(); ++i) {
    double& v = values_[i];
    if (!std::isfinite(v)) throw InvariantError("ProbVector: non-finite entry");
    if (v < -1e-15) throw InvariantError("ProbVector: negative entry " + std::to_string(v));
    if (v < 0.0) v = 0.0;
    if (i > 0 && v > values_[i - 1] + 1e-15) throw InvariantError("ProbVector: entries not sorted descending");
    sum += v;
  }
  if (values_.empty() || std::abs(sum - 1.0) > tol::trace)
    throw InvariantError("ProbVector: entries sum to " + std::to_string(sum));
  // enforce exact ordering after clamping
  for (std::size_t i = 1; i < values_.size(); ++i) values_[i] = std::min(values_[i], values_[i - 1]);
}

ProbVector ProbVector::from_unsorted(std::vector<double> values) {
  for (auto& v : values)
    if (v < 0.0 && v >= -1e-15) v = 0.0;
  std::sort(values.begin(), values.end(), std::greater<>());
  return ProbVector(std::move(values));
}

ProbVector ProbVector::uniform(std::size_t d) {
  if (d == 0) throw PreconditionError("ProbVector::uniform: d must be at least 1");
  return ProbVector(std::vector<double>(d, 1.0 / static_cast<double>(d)));
}

ProbVector ProbVector::padded(std::size_t n) const {
  ProbVector out = *this;
  if (n > out.values_.size()) out.values_.resize(n, 0.0);
  return out;
}

ProbVector ProbVector::trimmed(double cutoff) const {
  ProbVector out = *this;
  while (out.values_.size() > 1 && out.values_.back() <= cutoff) out.values_.pop_back();
  return out;
}

std::size_t ProbVector::support_size(double cutoff) const {
  return static_cast<std::size_t>(
      std::count_if(values_.begin(), values_.end(), [cutoff](double v) { return v > cutoff; }));
}

std::vector<double> partial_sum_gaps(const ProbVector& q, const ProbVector& p) {
  const std::size_t m = std::max(q.size(), p.size());
  std::vector<double> gaps(m);
  double sq = 0.0;
  double sp = 0.0;
  for (std::size_t k = 0; k < m; ++k) {
    sq += q.at_or_zero(k);
    sp += p.at_or_zero(k);
    gaps[k] = sq - sp;
  }
  return gaps;
}

std::optional<std::size_t> first_violation(const ProbVector& q, const ProbVector& p) {
  const auto gaps = partial_sum_gaps(q, p);
  for (std::size_t k = 0; k < gaps.size(); ++k)
    if (gaps[k] < -tol::major) return k + 1;
  return std::nullopt;
}

bool majorizes(const ProbVector& q, const ProbVector& p) { return !first_violation(q, p).has_value(); }

ProbVector bistochastic_mix(const ProbVector& q, std::size_t permutations, Rng& rng) {
  const auto weights = random_simplex_point(permutations, rng);
  std::vector<double> out(q.size(), 0.0);
  std::vector<std::size_t> perm(q.size());
  std::iota(perm.begin(), perm.end(), 0);
  for (std::size_t t = 0; t < permutations; ++t) {
    std::shuffle(perm.begin(), perm.end(), rng);
    for (std::size_t i = 0; i < q.size(); ++i) out[i] += weights[t] * q[perm[i]];
  }
  return ProbVector::from_unsorted(std::move(out));
}

ProbVector random_prob_vector(std::size_t d, Rng& rng) { return ProbVector::from_unsorted(random_simplex_point(d, rng)); }

}  // namespace entkit
