#pragma once

// Typical sets of product Schmidt spectra, the states and conversion
// protocols built from them, and scalar regularization experiments.

#include <boost/multiprecision/cpp_int.hpp>

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "entkit/kernels.hpp"
#include "entkit/majorization.hpp"
#include "entkit/measures.hpp"
#include "entkit/nielsen.hpp"
#include "entkit/states.hpp"

namespace entkit {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

enum class TypicalMode { automatic, type_class, exhaustive };
std::string to_string(TypicalMode mode);

struct TypicalOptions {
  TypicalMode mode = TypicalMode::automatic;
  /// Largest d^n that exhaustive enumeration may visit.
  std::uint64_t enumeration_cap = 1'000'000;
  kernels::Execution execution = kernels::Execution::parallel;
};

/// All index sequences with the given symbol counts share one probability.
struct TypeClass {
  std::vector<std::size_t> counts;
  BigInt multiplicity;
  double log2_probability = 0.0;
};

struct TypicalSet {
  ProbVector spectrum;  // strictly positive single-copy spectrum
  std::size_t copies = 0;
  double epsilon = 0.0;
  double entropy = 0.0;
  TypicalMode mode = TypicalMode::type_class;  // the path actually taken
  std::vector<TypeClass> classes;              // member classes, lexicographic by counts
  Rational probability;                        // exact total mass of the members
  BigInt size;                                 // number of member index sequences

  double total_probability() const;
  double log2_size() const;
  /// Total mass is at least 1 - epsilon (exact comparison).
  bool meets_mass_bound() const;
  bool contains(const std::vector<std::size_t>& counts) const;
};

/// Members are index sequences whose product probability lies in
/// [2^{-n(S+eps)}, 2^{-n(S-eps)}], each end widened by 1e-12 in log2.
/// Zero entries of q are dropped. Throws PreconditionError when S = 0 or
/// eps <= 0, CapExceededError when exhaustive mode is forced above the cap.
TypicalSet typical_set(const ProbVector& q, std::size_t n, double epsilon, const TypicalOptions& options = {});

struct InterpolationOptions {
  /// Test-only mutation: omit the 1/sqrt(p) factor.
  bool drop_normalization = false;
};

/// Member probabilities p_i / p in descending order. Throws
/// CapExceededError above 4096 members.
ProbVector interpolating_spectrum(const TypicalSet& typ);

/// (1/sqrt p) sum_{i in TYP} sqrt(p_i) |e_i>|f_i> in the n-fold Schmidt
/// bases of psi. Throws CapExceededError when (dimA dimB)^n > 4096,
/// SpectrumMismatchError when typ was not built from psi's spectrum and
/// PreconditionError for an empty set.
PureBipartiteState interpolating_state(const PureBipartiteState& psi, const TypicalSet& typ,
                                       InterpolationOptions options = {});

struct DilutionDims {
  std::uint64_t distill = 0;  // floor(p 2^{n(S-eps)})
  std::uint64_t cost = 0;     // ceil(p 2^{n(S+eps)})
  double log2_distill_rate(std::size_t n) const;
  double log2_cost_rate(std::size_t n) const;
};

/// Throws PreconditionError unless 0 < eps < min(S/2, 1/2) and 0 < p <= 1,
/// and when the distillation dimension would be zero.
DilutionDims dilution_dims(double p, double entropy, std::size_t n, double epsilon);

/// Protocols never exceed this many Schmidt terms.
inline constexpr std::size_t kProtocolLengthCap = 64;

/// phi_n -> maximally entangled state of Schmidt rank a.
NielsenProtocol concentrate_protocol(const PureBipartiteState& psi, std::size_t n, double epsilon);
/// Maximally entangled state of Schmidt rank b -> phi_n.
NielsenProtocol dilute_protocol(const PureBipartiteState& psi, std::size_t n, double epsilon);

struct RegularizationPoint {
  std::size_t n = 0;
  double per_copy = 0.0;        // f(n) / n
  double running_infimum = 0.0;  // min over m <= n of f(m) / m
};

struct RegularizationTrace {
  std::vector<RegularizationPoint> values;
  double limit_estimate = 0.0;
  bool is_subadditive_certified = false;
};

/// Evaluates f(1..n_max). With `subadditive` the estimate is the running
/// infimum and the prefix is checked for f(m+k) <= f(m) + f(k) + tolerance;
/// otherwise the estimate is the last per-copy value.
RegularizationTrace regularize(const std::function<double(std::size_t)>& f, std::size_t n_max, bool subadditive,
                               double tolerance = 1e-12,
                               kernels::Execution execution = kernels::Execution::serial);

struct BinomialAverageTrace {
  double x1 = 0.0;
  double limit = 0.0;          // x1 * L
  std::vector<double> values;  // index n - 1
};

/// (1/n) sum_k C(n,k) x1^k (1-x1)^{n-k} k g(k) for n = 1..n_max.
BinomialAverageTrace binomial_average_check(const std::function<double(std::size_t)>& g, double limit, double x1,
                                            std::size_t n_max);

struct UniquenessRow {
  std::size_t n = 0;
  double epsilon = 0.0;
  double value_per_n = 0.0;
  std::optional<double> log2a_over_n;  // empty when the distillation dimension is zero
  std::optional<double> log2b_over_n;
  double p = 0.0;
  BigInt typ_size;
  double gap_to_svn = 0.0;
};

struct UniquenessReport {
  ProbVector psi_spectrum;
  PureMeasure measure = PureMeasure::svn;
  double svn = 0.0;
  std::vector<UniquenessRow> rows;
};

/// Measures psi^{(x)n} per copy for n = 1..n_max next to the dilution and
/// distillation rates. Throws CapExceededError when rank^n exceeds 10^6.
UniquenessReport uniqueness_experiment(const PureBipartiteState& psi, PureMeasure measure, std::size_t n_max,
                                       const std::function<double(std::size_t)>& epsilon_schedule);

/// Pair of Schmidt spectra with nearly equal states but S_inf values n and 2n:
/// one coefficient 2^-n plus 4^n - 2^n coefficients 4^-n, against the
/// uniform spectrum on 4^n terms.
struct RenyiCounterexample {
  std::size_t n = 0;
  ProbVector near;
  ProbVector uniform;
  double sinf_near = 0.0;
  double sinf_uniform = 0.0;
  double overlap = 0.0;         // <near|uniform> in a shared Schmidt basis
  double trace_distance = 0.0;  // 2 sqrt(1 - overlap^2)
};

RenyiCounterexample renyi_counterexample(std::size_t n);

}  // namespace entkit
