#include "entkit/cli.hpp"

#include <CLI11.hpp>

#include <charconv>
#include <fstream>
#include <ostream>
#include <sstream>

#include "entkit/asymptotics.hpp"
#include "entkit/error.hpp"
#include "entkit/io.hpp"
#include "entkit/measures.hpp"
#include "entkit/nielsen.hpp"
#include "entkit/tolerances.hpp"
#include "entkit/verify.hpp"

namespace entkit::cli {
namespace {

using io::Json;

/// Raised for a measure or command that has no meaning on the given input.
class UnsupportedError : public Error {
 public:
  using Error::Error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot read " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out || !(out << text)) throw ParseError("cannot write " + path);
}

std::uint64_t parse_seed(const std::string& text, const char* origin) {
  std::uint64_t value = 0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc{} || ptr != end || text.empty())
    throw ParseError(std::string(origin) + ": expected an unsigned integer seed, got \"" + text + "\"");
  return value;
}

void apply_config_file(CliConfig& config, const std::string& path) {
  const Json j = io::parse(read_file(path));
  if (!j.is_object()) throw ParseError(path + ": expected an object");
  auto unsigned_field = [&](const std::string& key, const Json& v) {
    if (!v.is_number_unsigned()) throw ParseError(path + ": \"" + key + "\" must be an unsigned integer");
    return v.get<std::uint64_t>();
  };
  for (auto it = j.begin(); it != j.end(); ++it) {
    const std::string& key = it.key();
    const Json& v = it.value();
    if (key == "seed") {
      config.seed = unsigned_field(key, v);
    } else if (key == "restarts") {
      config.restarts = unsigned_field(key, v);
    } else if (key == "iterations") {
      config.iterations = unsigned_field(key, v);
    } else if (key == "enumeration_cap") {
      config.enumeration_cap = unsigned_field(key, v);
    } else if (key == "tolerance") {
      if (!v.is_number() || v.get<double>() <= 0.0) throw ParseError(path + ": \"tolerance\" must be positive");
      config.tolerance = v.get<double>();
    } else if (key == "output") {
      if (!v.is_string()) throw ParseError(path + ": \"output\" must be a string");
      config.output = v.get<std::string>();
    } else {
      throw ParseError(path + ": unknown setting \"" + key + "\"");
    }
  }
}

/// Values given on the command line; each overrides the config file.
struct Flags {
  std::string config_file;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> restarts;
  std::optional<std::size_t> iterations;
  std::optional<double> tolerance;
  std::optional<std::uint64_t> enumeration_cap;
  std::optional<std::string> output;
};

CliConfig resolve(const Flags& flags, const std::optional<std::string>& env_seed) {
  CliConfig config;
  if (!flags.config_file.empty()) apply_config_file(config, flags.config_file);
  if (env_seed) config.seed = parse_seed(*env_seed, "ENTKIT_SEED");
  if (flags.seed) config.seed = *flags.seed;
  if (flags.restarts) config.restarts = *flags.restarts;
  if (flags.iterations) config.iterations = *flags.iterations;
  if (flags.tolerance) config.tolerance = *flags.tolerance;
  if (flags.enumeration_cap) config.enumeration_cap = *flags.enumeration_cap;
  if (flags.output) config.output = *flags.output;
  return config;
}

OptimizerBudget budget_for(const CliConfig& config, OptimizerBudget base) {
  base.seed = config.seed;
  if (config.restarts) base.restarts = *config.restarts;
  if (config.iterations) base.iterations = *config.iterations;
  return base;
}

io::State load_state(const std::string& path) { return io::state_from_json(io::parse(read_file(path))); }

const PureBipartiteState& require_pure(const io::State& state, const char* command) {
  if (const auto* psi = std::get_if<PureBipartiteState>(&state)) return *psi;
  throw UnsupportedError(std::string(command) + " needs a pure state");
}

std::optional<PureMeasure> parse_pure_measure(std::string_view name) {
  for (PureMeasure m : {PureMeasure::svn, PureMeasure::s0, PureMeasure::sinf, PureMeasure::ef_pure})
    if (to_string(m) == name) return m;
  return std::nullopt;
}

MeasureReport closed_form(std::string name, double value) { return {std::move(name), value, ReportKind::exact, {}}; }

Json cmd_measure(const io::State& state, const std::string& kind, const CliConfig& config) {
  const OptimizerBudget budget = budget_for(config, {});
  if (kind == "ef" || kind == "er") {
    const DensityOperator rho = std::visit(
        [](const auto& s) -> DensityOperator {
          if constexpr (std::is_same_v<std::decay_t<decltype(s)>, PureBipartiteState>)
            return s.projector();
          else
            return s;
        },
        state);
    return io::to_json(kind == "ef" ? entanglement_formation_mixed(rho, budget).report
                                    : relative_entropy_entanglement(rho, budget).report);
  }
  if (kind == "entropy") {
    // Reduced entropy for a pure state, the entropy of the operator itself otherwise.
    if (const auto* psi = std::get_if<PureBipartiteState>(&state))
      return io::to_json(closed_form(kind, reduced_entropy(*psi)));
    return io::to_json(closed_form(kind, von_neumann_entropy(std::get<DensityOperator>(state))));
  }
  const auto m = parse_pure_measure(kind);
  if (!m) throw UnsupportedError("unknown measure kind \"" + kind + "\"");
  const auto* psi = std::get_if<PureBipartiteState>(&state);
  if (!psi) throw UnsupportedError("measure " + kind + " is defined for pure states only");
  return io::to_json(closed_form(kind, evaluate(*m, *psi)));
}

Json cmd_convert(const PureBipartiteState& source, const PureBipartiteState& target, const std::string& emit) {
  const Conversion conversion = plan_conversion(source, target);
  const DensityOperator reached = run_conversion(conversion, source);
  Json out{{"convertible", true},
           {"steps", conversion.protocol.steps.size()},
           {"residual", trace_distance(reached, target.projector())}};
  Json protocol = io::to_json(conversion.protocol);
  if (emit.empty()) {
    out["protocol"] = std::move(protocol);
  } else {
    write_file(emit, io::dump(protocol));
    out["protocol_file"] = emit;
  }
  return out;
}

TypicalMode parse_mode(const std::string& name) {
  if (name == "auto") return TypicalMode::automatic;
  if (name == "type_class") return TypicalMode::type_class;
  if (name == "exhaustive") return TypicalMode::exhaustive;
  throw ParseError("unknown typical-set mode \"" + name + "\"");
}

Json cmd_typical(const PureBipartiteState& psi, std::size_t n_max, double epsilon, const std::string& mode,
                 bool with_classes, const CliConfig& config) {
  const ProbVector spectrum = schmidt(psi).spectrum().trimmed(tol::schmidt_cutoff);
  TypicalOptions options;
  options.mode = parse_mode(mode);
  options.enumeration_cap = config.enumeration_cap;
  Json rows = Json::array();
  for (std::size_t n = 1; n <= n_max; ++n) rows.push_back(io::to_json(typical_set(spectrum, n, epsilon, options), with_classes));
  return {{"spectrum", io::to_json(spectrum)},
          {"S_vN", shannon_entropy(spectrum.values())},
          {"epsilon", epsilon},
          {"rows", std::move(rows)}};
}

SuiteConfig suite_config(const CliConfig& config, const std::string& mutation, std::optional<std::size_t> samples,
                         std::optional<std::size_t> pairs) {
  SuiteConfig sc;
  sc.seed = config.seed;
  sc.tolerance = config.tolerance;
  sc.sampler.seed = config.seed;
  sc.sampler.budget = budget_for(config, sc.sampler.budget);
  if (samples) sc.sampler.samples = *samples;
  if (pairs) sc.nielsen_pairs = *pairs;
  const auto m = parse_mutation(mutation);
  if (!m) throw ParseError("unknown mutation \"" + mutation + "\"");
  sc.mutation = *m;
  return sc;
}

void emit(const Json& result, const CliConfig& config, std::ostream& out) {
  const std::string text = io::dump(result);
  if (config.output.empty())
    out << text;
  else
    write_file(config.output, text);
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err,
        std::optional<std::string> env_seed) {
  CLI::App app{"Bipartite entanglement measures, conversion protocols and verification suites", "entkit"};
  app.require_subcommand(1);
  Flags flags;
  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--config", flags.config_file, "JSON settings file")->check(CLI::ExistingFile);
    cmd->add_option("--seed", flags.seed, "RNG seed (default 0; overrides ENTKIT_SEED)");
    cmd->add_option("--restarts", flags.restarts, "optimizer restarts");
    cmd->add_option("--iterations", flags.iterations, "optimizer iterations per restart");
    cmd->add_option("--tolerance", flags.tolerance, "verification tolerance (default 1e-10)")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--enumeration-cap", flags.enumeration_cap, "largest d^n for exhaustive enumeration");
    cmd->add_option("--output,-o", flags.output, "write JSON here instead of standard output");
  };

  std::string state_file, target_file, kind, emit_file, mode = "auto", measure = "svn", suite, mutation = "none";
  std::size_t n = 0, n_max = 0;
  double epsilon = 0.0;
  bool with_classes = false;
  std::optional<std::size_t> samples, pairs;

  auto* measure_cmd = app.add_subcommand("measure", "evaluate an entanglement measure");
  measure_cmd->add_option("state", state_file, "state JSON")->required();
  measure_cmd->add_option("--kind", kind, "measure")
      ->required()
      ->check(CLI::IsMember({"svn", "s0", "sinf", "ef", "er", "entropy"}));
  add_common(measure_cmd);

  auto* convert_cmd = app.add_subcommand("convert", "synthesize and check a pure-state conversion protocol");
  convert_cmd->add_option("source", state_file, "source state JSON")->required();
  convert_cmd->add_option("target", target_file, "target state JSON")->required();
  convert_cmd->add_option("--emit", emit_file, "write the protocol JSON to this file");
  add_common(convert_cmd);

  auto* typical_cmd = app.add_subcommand("typical", "typical sets of the Schmidt spectrum for n = 1..N");
  typical_cmd->add_option("state", state_file, "pure state JSON")->required();
  typical_cmd->add_option("--n", n, "largest number of copies")->required()->check(CLI::PositiveNumber);
  typical_cmd->add_option("--eps", epsilon, "typicality width")->required()->check(CLI::PositiveNumber);
  typical_cmd->add_option("--mode", mode, "auto, type_class or exhaustive")
      ->check(CLI::IsMember({"auto", "type_class", "exhaustive"}));
  typical_cmd->add_flag("--classes", with_classes, "list the member type classes");
  add_common(typical_cmd);

  auto* uniq_cmd = app.add_subcommand("uniqueness", "per-copy measure next to the dilution and distillation rates");
  uniq_cmd->add_option("state", state_file, "pure state JSON")->required();
  uniq_cmd->add_option("--measure", measure, "svn, s0, sinf or ef_pure")
      ->check(CLI::IsMember({"svn", "s0", "sinf", "ef_pure"}));
  uniq_cmd->add_option("--nmax", n_max, "largest number of copies")->required()->check(CLI::PositiveNumber);
  uniq_cmd->add_option("--eps", epsilon, "typicality width")->required()->check(CLI::PositiveNumber);
  add_common(uniq_cmd);

  auto* verify_cmd = app.add_subcommand("verify", "run a verification suite; exits 1 on any unmet expectation");
  verify_cmd->add_option("--suite", suite, "suite name")->required()->check(CLI::IsMember(suite_names()));
  verify_cmd->add_option("--mutation", mutation, "inject a defect")
      ->check(CLI::IsMember({"none", "drop_interpolation_normalization", "drop_d_prefactor"}));
  verify_cmd->add_option("--samples", samples, "samples per sampled condition");
  verify_cmd->add_option("--pairs", pairs, "spectrum pairs per Nielsen property");
  add_common(verify_cmd);

  std::string check, replay_measure = "-";
  std::uint64_t sample_seed = 0;
  auto* replay_cmd = app.add_subcommand("replay", "re-run the single sample behind a suite witness");
  replay_cmd->add_option("check", check, "check name as listed in the suite report")->required();
  replay_cmd->add_option("--measure", replay_measure, "measure of the entry (\"-\" for none)");
  replay_cmd->add_option("--sample-seed", sample_seed, "seed recorded in the witness")->required();
  replay_cmd->add_option("--mutation", mutation, "inject a defect")
      ->check(CLI::IsMember({"none", "drop_interpolation_normalization", "drop_d_prefactor"}));
  add_common(replay_cmd);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == static_cast<int>(CLI::ExitCodes::Success) ? ok : bad_input;
  }

  try {
    const CliConfig config = resolve(flags, env_seed);
    bool passed = true;
    Json result;
    if (*measure_cmd) {
      result = cmd_measure(load_state(state_file), kind, config);
    } else if (*convert_cmd) {
      const io::State source = load_state(state_file);
      const io::State target = load_state(target_file);
      try {
        result = cmd_convert(require_pure(source, "convert"), require_pure(target, "convert"), emit_file);
      } catch (const NotConvertibleError& e) {
        emit(Json{{"convertible", false}, {"k", e.index()}, {"gap", e.gap()}}, config, out);
        err << "entkit: " << e.what() << '\n';
        return not_convertible;
      }
    } else if (*typical_cmd) {
      result = cmd_typical(require_pure(load_state(state_file), "typical"), n, epsilon, mode, with_classes, config);
    } else if (*uniq_cmd) {
      const io::State state = load_state(state_file);
      const double eps = epsilon;
      result = io::to_json(uniqueness_experiment(require_pure(state, "uniqueness"), *parse_pure_measure(measure),
                                                 n_max, [eps](std::size_t) { return eps; }));
    } else if (*replay_cmd) {
      const AxiomCheckResult r = replay(check, replay_measure, sample_seed, suite_config(config, mutation, {}, {}));
      passed = r.outcome != Outcome::fail;
      result = io::to_json(r);
    } else {
      const SuiteReport report = run_suite(suite, suite_config(config, mutation, samples, pairs));
      passed = report.passed();
      result = io::to_json(report);
    }
    emit(result, config, out);
    return passed ? ok : verification_failed;
  } catch (const ParseError& e) {
    err << "entkit: " << e.what() << '\n';
    return bad_input;
  } catch (const PreconditionError& e) {
    err << "entkit: " << e.what() << '\n';
    return bad_input;
  } catch (const UnsupportedError& e) {
    err << "entkit: " << e.what() << '\n';
    return unsupported;
  } catch (const CapExceededError& e) {
    err << "entkit: " << e.what() << '\n';
    return unsupported;
  } catch (const NotConvertibleError& e) {
    err << "entkit: " << e.what() << '\n';
    return not_convertible;
  } catch (const std::exception& e) {
    // InvariantError, DimensionError, SpectrumMismatchError and anything unexpected.
    err << "entkit: " << e.what() << '\n';
    return invariant_violation;
  }
}

}  // namespace entkit::cli
