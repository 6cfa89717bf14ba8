#pragma once

// Entanglement-measure conditions as executable predicates.
//
// Each condition is checked on sampled inputs drawn from a per-sample seed,
// so a failing sample can be replayed from the seed recorded in its witness.
// Continuity conditions are checked on constructed convergent sequences
// instead, because sampling cannot decide a limit.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "entkit/measures.hpp"

namespace entkit {

enum class Outcome { pass, fail, inconclusive };
std::string_view to_string(Outcome outcome);

/// Measures the checks know how to evaluate. The first four are closed
/// forms on pure states; `ef` and `er` are the optimizer-backed reports.
enum class MeasureId { svn, s0, sinf, ef_pure, ef, er };
std::string_view to_string(MeasureId measure);
std::optional<MeasureId> parse_measure_id(std::string_view name);
const std::vector<MeasureId>& registered_measures();
/// Whether the measure is defined on mixed states.
bool accepts_mixed(MeasureId measure);

struct AxiomWitness {
  std::uint64_t seed = 0;  // sample seed; zero for deterministic families
  std::string inputs;
  double lhs = 0.0;
  double rhs = 0.0;
};

struct AxiomCheckResult {
  std::string axiom;
  std::string measure;
  Outcome outcome = Outcome::inconclusive;
  std::size_t samples = 0;
  double tolerance = 0.0;
  std::vector<AxiomWitness> witnesses;  // non-empty whenever outcome == fail
  std::string note;
};

struct SamplerConfig {
  std::uint64_t seed = 0;
  std::size_t samples = 8;
  /// Budget for optimizer-backed measures. Samples run one after another,
  /// so the restarts themselves default to serial.
  OptimizerBudget budget{2, 40, 0, kernels::Execution::serial};
};

/// "E0" ... "E6'", "P0" ... "P5''"; primes are ASCII apostrophes.
const std::vector<std::string>& axiom_names();
bool is_axiom(std::string_view name);

/// Sample seed for index k of a check.
std::uint64_t sample_seed(const SamplerConfig& sampler, std::string_view axiom, std::size_t k);

/// Throws PreconditionError for an unknown axiom. `tolerance` applies to
/// exact values; optimizer reports use twice their optimizer tolerance on
/// the side where an upper bound can be trusted.
AxiomCheckResult check_axiom(std::string_view axiom, MeasureId measure, const SamplerConfig& sampler = {},
                             double tolerance = 1e-10);

/// The same check restricted to the single sample drawn from `seed`.
AxiomCheckResult check_axiom_sample(std::string_view axiom, MeasureId measure, std::uint64_t seed,
                                    const SamplerConfig& sampler = {}, double tolerance = 1e-10);

/// Implications between conditions, each instantiated on the registered
/// measures: the hypothesis is checked first and the conclusion is only
/// tested where the hypothesis held.
std::vector<AxiomCheckResult> lemma_implication_suite(const SamplerConfig& sampler = {});
/// Reuses condition results from `known` (matched by axiom and measure
/// name) instead of recomputing them; they must come from the same sampler.
std::vector<AxiomCheckResult> lemma_implication_suite(const SamplerConfig& sampler,
                                                      std::span<const AxiomCheckResult> known);

}  // namespace entkit
