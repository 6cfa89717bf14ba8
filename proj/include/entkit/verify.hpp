#pragma once

// Named verification suites: the condition matrix over all registered
// measures, a property campaign for the Nielsen construction and checks of
// the typical-set machinery. Every sampled check records the seed of a
// failing sample, and `replay` re-runs exactly that sample.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "entkit/axioms.hpp"
#include "entkit/kernels.hpp"

namespace entkit {

/// Deliberate defects for exercising the suites.
enum class Mutation { none, drop_interpolation_normalization, drop_d_prefactor };
std::string_view to_string(Mutation mutation);
std::optional<Mutation> parse_mutation(std::string_view name);

enum class Expectation { pass, fail, not_fail };
std::string_view to_string(Expectation expectation);

struct SuiteConfig {
  std::uint64_t seed = 0;
  std::size_t nielsen_pairs = 500;
  SamplerConfig sampler;  // its seed is replaced by `seed`
  double tolerance = 1e-10;
  Mutation mutation = Mutation::none;
  kernels::Execution execution = kernels::Execution::parallel;
};

struct SuiteEntry {
  AxiomCheckResult result;
  Expectation expected = Expectation::not_fail;
  bool met() const;
};

struct SuiteReport {
  std::string suite;
  std::uint64_t seed = 0;
  Mutation mutation = Mutation::none;
  std::vector<SuiteEntry> entries;  // sorted by check name, then measure
  bool passed() const;
};

/// "axioms", "nielsen", "asymptotics" and "all".
const std::vector<std::string>& suite_names();

/// Throws PreconditionError for an unknown suite name.
SuiteReport run_suite(std::string_view suite, const SuiteConfig& config = {});

/// Re-runs the single sample behind a witness. `measure` is the entry's
/// measure name ("-" for checks without one).
AxiomCheckResult replay(std::string_view check, std::string_view measure, std::uint64_t seed,
                        const SuiteConfig& config = {});

}  // namespace entkit
