#pragma once

// The `entkit` command-line tool, callable in-process.
//
// Every command reads and writes the JSON forms from entkit/io.hpp. Settings
// resolve in the order: built-in defaults, then `--config FILE`, then the
// ENTKIT_SEED environment variable (seed only), then explicit flags.
//
// Exit codes:
//   0  success
//   1  a verification suite reported failures, or a replayed sample failed
//   2  unreadable input, malformed JSON or bad arguments
//   3  input that violates a state or channel invariant
//   4  a measure or command that does not apply to the input, or a size cap
//   5  the requested conversion is impossible

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace entkit::cli {

enum ExitCode : int {
  ok = 0,
  verification_failed = 1,
  bad_input = 2,
  invariant_violation = 3,
  unsupported = 4,
  not_convertible = 5,
};

struct CliConfig {
  std::uint64_t seed = 0;
  /// Optimizer budget. Unset values fall back to the library default for
  /// `measure` and to the sampler default for `verify`.
  std::optional<std::size_t> restarts;
  std::optional<std::size_t> iterations;
  double tolerance = 1e-10;
  std::uint64_t enumeration_cap = 1'000'000;
  /// Output file; empty means standard output.
  std::string output;
};

/// `args` excludes the program name. `env_seed` is the value of ENTKIT_SEED,
/// if set. JSON results go to `out` (or the configured file), diagnostics to
/// `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err,
        std::optional<std::string> env_seed = std::nullopt);

}  // namespace entkit::cli
