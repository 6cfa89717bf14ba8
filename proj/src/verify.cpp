#include "entkit/verify.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <iomanip>
#include <sstream>

#include "entkit/asymptotics.hpp"
#include "entkit/error.hpp"
#include "entkit/majorization.hpp"
#include "entkit/nielsen.hpp"
#include "entkit/rng.hpp"
#include "entkit/tolerances.hpp"

namespace entkit {
namespace {

struct Violation {
  std::string inputs;
  double lhs = 0.0;
  double rhs = 0.0;
};

using Sampler = std::function<std::vector<Violation>(std::uint64_t seed, const SuiteConfig&)>;

struct SuiteCheck {
  std::string name;
  std::function<std::size_t(const SuiteConfig&)> samples;
  Sampler run;
};

std::string fmt(double x) {
  std::ostringstream os;
  os << std::setprecision(17) << x;
  return os.str();
}

std::string fmt(const ProbVector& p) {
  std::string s = "(";
  for (std::size_t i = 0; i < p.size(); ++i) s += (i ? ", " : "") + fmt(p[i]);
  return s + ")";
}

std::size_t pick(Rng& rng, std::size_t lo, std::size_t hi) {
  return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

double uniform(Rng& rng, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }

SynthesisOptions synthesis_options(const SuiteConfig& config) {
  return {config.mutation == Mutation::drop_d_prefactor};
}

InterpolationOptions interpolation_options(const SuiteConfig& config) {
  return {config.mutation == Mutation::drop_interpolation_normalization};
}

PureBipartiteState state_with_spectrum(const ProbVector& p, std::size_t da, std::size_t db, Rng& rng) {
  return state_from_schmidt(p.values(), random_unitary(da, rng), random_unitary(db, rng));
}

// ---------------------------------------------------------------------------
// Nielsen campaign

std::vector<Violation> nielsen_soundness(std::uint64_t seed, const SuiteConfig& config) {
  Rng rng(seed);
  const std::size_t m = pick(rng, 2, 6);
  const auto q = random_prob_vector(m, rng);
  const auto p = bistochastic_mix(q, 2, rng);
  const std::string inputs = "source " + fmt(p) + " target " + fmt(q);
  const auto proto = synthesize(p, q, synthesis_options(config));
  std::vector<Violation> out;
  for (const auto& step : proto.steps) {
    const double defect = step_completeness_defect(step);
    if (!(defect <= 1e-9)) out.push_back({inputs + ": completeness defect of step " + std::to_string(step.k), defect, 1e-9});
    if (!step_operators_unitary(step, 1e-9)) out.push_back({inputs + ": non-unitary correction", 1.0, 0.0});
  }
  const auto psi = state_with_spectrum(p, m, m + pick(rng, 0, 1), rng);
  const double distance = trace_distance(apply_protocol(proto, psi), protocol_target(proto, psi).projector());
  if (!(distance <= 1e-8)) out.push_back({inputs + ": trace distance to target", distance, 1e-8});
  return out;
}

/// First k with sum_{i<k} q_i < sum_{i<k} p_i, by direct summation over
/// freshly sorted copies.
std::optional<std::size_t> brute_force_violation(const ProbVector& q, const ProbVector& p, double& margin) {
  std::vector<double> a(q.values().begin(), q.values().end());
  std::vector<double> b(p.values().begin(), p.values().end());
  std::sort(a.begin(), a.end(), std::greater<>());
  std::sort(b.begin(), b.end(), std::greater<>());
  const std::size_t n = std::max(a.size(), b.size());
  a.resize(n, 0.0);
  b.resize(n, 0.0);
  double sa = 0.0, sb = 0.0;
  margin = 1.0;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    sa += a[k];
    sb += b[k];
    margin = std::min(margin, std::abs(sa - sb));
    if (sa < sb) return k + 1;
  }
  return std::nullopt;
}

std::vector<Violation> nielsen_completeness(std::uint64_t seed, const SuiteConfig& config) {
  Rng rng(seed);
  std::vector<Violation> out;
  // Draw until a non-majorizing pair appears; majorizing pairs met on the
  // way must be accepted. Pairs closer than 1e-6 to the boundary are redrawn.
  for (;;) {
    const auto p = random_prob_vector(pick(rng, 2, 6), rng);
    const auto q = random_prob_vector(pick(rng, 2, 6), rng);
    double margin = 0.0;
    const auto expected = brute_force_violation(q, p, margin);
    if (margin < 1e-6) continue;
    const std::string inputs = "source " + fmt(p) + " target " + fmt(q);
    try {
      synthesize(p, q, synthesis_options(config));
      if (expected) out.push_back({inputs + ": accepted a non-majorizing pair", 0.0, static_cast<double>(*expected)});
    } catch (const NotConvertibleError& e) {
      if (!expected)
        out.push_back({inputs + ": refused a majorizing pair", static_cast<double>(e.index()), 0.0});
      else if (e.index() != *expected)
        out.push_back({inputs + ": wrong violated index", static_cast<double>(e.index()),
                       static_cast<double>(*expected)});
    }
    if (expected) return out;
  }
}

std::vector<Violation> nielsen_one_way_form(std::uint64_t seed, const SuiteConfig& config) {
  Rng rng(seed);
  const std::size_t m = pick(rng, 2, 5);
  const auto q = random_prob_vector(m, rng);
  const auto p = bistochastic_mix(q, 2, rng);
  const std::string inputs = "source " + fmt(p) + " target " + fmt(q);
  const auto proto = synthesize(p, q, synthesis_options(config));
  for (const auto& step : proto.steps) (void)flatten(step_as_one_way(step));
  const auto channel = protocol_channel(proto);
  const auto out = apply(channel, canonical_state(p).projector());
  const double distance = trace_distance(out, canonical_state(q).projector());
  if (distance <= 1e-8) return {};
  return {{inputs + ": protocol channel misses the target", distance, 1e-8}};
}

std::vector<Violation> nielsen_entropy_monotone(std::uint64_t seed, const SuiteConfig& config) {
  Rng rng(seed);
  const std::size_t m = pick(rng, 2, 6);
  const auto q = random_prob_vector(m, rng);
  const auto p = bistochastic_mix(q, 3, rng);
  const std::string inputs = "source " + fmt(p) + " target " + fmt(q);
  const auto proto = synthesize(p, q, synthesis_options(config));
  std::vector<Violation> out;
  double previous = shannon_entropy(p.values());
  for (const auto& step : proto.steps) {
    const double h = shannon_entropy(step.result.values());
    if (h > previous + 1e-12) out.push_back({inputs + ": entropy rose at step " + std::to_string(step.k), h, previous});
    if (!majorizes(q, step.result) || !majorizes(step.result, p))
      out.push_back({inputs + ": intermediate spectrum leaves the majorization interval", 1.0, 0.0});
    previous = h;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Typical sets and the constructions built on them

std::vector<Violation> typical_exactness(std::uint64_t, const SuiteConfig& config) {
  std::vector<Violation> out;
  struct Case {
    ProbVector q;
    std::size_t n_max;
  };
  const std::vector<Case> cases{{ProbVector({0.9, 0.1}), 14}, {ProbVector({0.5, 0.3, 0.2}), 8}};
  for (const auto& c : cases) {
    const double s = shannon_entropy(c.q.values());
    for (double eps : {0.05, 0.1, 0.2, 0.3})
      for (std::size_t n = 1; n <= c.n_max; ++n) {
        const auto by_class = typical_set(c.q, n, eps, {TypicalMode::type_class, 1'000'000, config.execution});
        const auto by_sequence = typical_set(c.q, n, eps, {TypicalMode::exhaustive, 1'000'000, config.execution});
        const std::string inputs = "q " + fmt(c.q) + " n=" + std::to_string(n) + " eps " + fmt(eps);
        if (by_class.size != by_sequence.size || by_class.probability != by_sequence.probability)
          out.push_back({inputs + ": type classes and enumeration disagree", by_class.total_probability(),
                         by_sequence.total_probability()});
        const double nd = static_cast<double>(n);
        for (const auto& cls : by_class.classes)
          if (cls.log2_probability < -nd * (s + eps) - 1e-12 || cls.log2_probability > -nd * (s - eps) + 1e-12)
            out.push_back({inputs + ": member probability outside the window", cls.log2_probability, -nd * s});
        if (by_class.size > 0 && by_class.log2_size() > nd * (s + eps) + 1e-12)
          out.push_back({inputs + ": more members than 2^{n(S+eps)}", by_class.log2_size(), nd * (s + eps)});
      }
  }
  return out;
}

std::vector<Violation> typical_interpolation(std::uint64_t seed, const SuiteConfig& config) {
  Rng rng(seed);
  const double top = uniform(rng, 0.6, 0.95);
  const ProbVector q({top, 1.0 - top});
  const auto psi = canonical_state(q);
  const std::size_t n = pick(rng, 2, 6);
  const double eps = uniform(rng, 0.1, 0.4);
  const std::string inputs = "Schmidt (" + fmt(top) + ", " + fmt(1.0 - top) + ") n=" + std::to_string(n) + " eps " +
                             fmt(eps);
  const auto typ = typical_set(q, n, eps, {TypicalMode::automatic, 1'000'000, config.execution});
  if (typ.size == 0) return {};
  const double p = typ.total_probability();
  const auto phi = interpolating_state(psi, typ, interpolation_options(config));
  const auto copies = tensor_power(psi, n);
  std::vector<Violation> out;
  const double overlap = std::norm(inner(copies.amplitudes(), phi.amplitudes()));
  if (std::abs(overlap - p) > 1e-10) out.push_back({inputs + ": squared overlap differs from p", overlap, p});
  const double formula = 2.0 * std::sqrt(std::max(0.0, 1.0 - p));
  const double distance = trace_distance(copies, phi);
  if (std::abs(distance - formula) > 1e-10)
    out.push_back({inputs + ": trace distance differs from 2 sqrt(1 - p)", distance, formula});
  if (n <= 3) {
    const double direct = trace_norm_hermitian(copies.projector().matrix() - phi.projector().matrix());
    if (std::abs(direct - formula) > 1e-10) out.push_back({inputs + ": trace norm differs from 2 sqrt(1 - p)", direct, formula});
  }
  return out;
}

std::vector<Violation> typical_dilution_bracket(std::uint64_t seed, const SuiteConfig&) {
  Rng rng(seed);
  double s = 0.0;
  ProbVector q;
  do {
    q = random_prob_vector(pick(rng, 2, 3), rng);
    s = shannon_entropy(q.values());
  } while (s < 0.2);
  const std::size_t n = pick(rng, 4, 16);
  const double eps = uniform(rng, 0.02, std::min(s / 2.0, 0.5) - 0.01);
  // The bracket argument needs p >= 1 - eps.
  const double p = uniform(rng, 1.0 - eps, 1.0);
  const std::string inputs = "S " + fmt(s) + " n=" + std::to_string(n) + " eps " + fmt(eps) + " p " + fmt(p);
  DilutionDims dims;
  try {
    dims = dilution_dims(p, s, n, eps);
  } catch (const PreconditionError&) {
    return {};
  }
  std::vector<Violation> out;
  const double nd = static_cast<double>(n);
  const double a_rate = dims.log2_distill_rate(n), b_rate = dims.log2_cost_rate(n);
  if (!(std::abs(a_rate - s) < eps + 2.0 / nd)) out.push_back({inputs + ": distillation rate", a_rate, s});
  if (!(std::abs(b_rate - s) < eps + 1.0 / nd)) out.push_back({inputs + ": cost rate", b_rate, s});
  return out;
}

/// Bound on the trace distance between the protocol's output and its
/// target, accumulated step by step on the pure branches of each
/// instrument: a step's output on its exact input is within
/// sum_b w_b ||beta_b - result|| + |sum_b w_b - 1| of the step's result.
/// Chaining these bounds avoids forming the 4096-dimensional states.
double protocol_error_bound(const NielsenProtocol& proto) {
  const std::size_t m = proto.length();
  double bound = 0.0;
  for (const auto& step : proto.steps) {
    ComplexMatrix coeff(m, m);
    for (std::size_t i = 0; i < m; ++i) coeff(i, i) = std::sqrt(step.source[i]);
    const auto result = canonical_state(step.result);
    double total = 0.0;
    for (int b = 0; b < 2; ++b) {
      const ComplexMatrix branch = b == 0 ? step.c * coeff * step.u.transpose() : step.d * coeff * step.v.transpose();
      ComplexVector amp(branch.data().begin(), branch.data().end());
      const double n = norm(amp);
      const double w = n * n;
      total += w;
      if (w <= 0.0) continue;
      for (auto& x : amp) x /= n;
      bound += w * trace_distance(PureBipartiteState(std::move(amp), m, m), result);
    }
    bound += std::abs(total - 1.0);
  }
  return bound;
}

std::vector<Violation> typical_protocols(std::uint64_t seed, const SuiteConfig&) {
  Rng rng(seed);
  const double top = uniform(rng, 0.75, 0.92);
  const auto psi = canonical_state(ProbVector({top, 1.0 - top}));
  const double s = reduced_entropy(psi);
  const std::size_t n = pick(rng, 4, 8);
  const double eps = uniform(rng, 0.2 * s, 0.45 * s);
  const std::string inputs = "Schmidt (" + fmt(top) + ", " + fmt(1.0 - top) + ") n=" + std::to_string(n) + " eps " +
                             fmt(eps);
  std::vector<Violation> out;
  for (int which = 0; which < 2; ++which) {
    NielsenProtocol proto;
    try {
      proto = which == 0 ? concentrate_protocol(psi, n, eps) : dilute_protocol(psi, n, eps);
    } catch (const PreconditionError&) {
      continue;
    } catch (const CapExceededError&) {
      continue;
    }
    const double bound = protocol_error_bound(proto);
    if (!(bound <= 1e-8))
      out.push_back({inputs + (which == 0 ? ": concentration" : ": dilution") + " misses its target", bound, 1e-8});
  }
  return out;
}

std::vector<Violation> regularization_fekete(std::uint64_t, const SuiteConfig&) {
  const std::size_t n_max = 60;
  const auto trace = regularize([](std::size_t n) { return static_cast<double>(n) + 1.0; }, n_max, true);
  std::vector<Violation> out;
  if (!trace.is_subadditive_certified) out.push_back({"f(n) = n + 1: subadditivity not certified", 0.0, 1.0});
  for (std::size_t i = 1; i < trace.values.size(); ++i)
    if (trace.values[i].running_infimum > trace.values[i - 1].running_infimum)
      out.push_back({"f(n) = n + 1: running infimum rose at n=" + std::to_string(i + 1),
                     trace.values[i].running_infimum, trace.values[i - 1].running_infimum});
  const double gap = trace.limit_estimate - 1.0;
  if (gap < 0.0 || gap > 1.0 / static_cast<double>(n_max) + 1e-12)
    out.push_back({"f(n) = n + 1: estimate far from 1", trace.limit_estimate, 1.0});
  return out;
}

std::vector<Violation> regularization_binomial(std::uint64_t, const SuiteConfig&) {
  const std::size_t n_max = 60;
  const double limit = 0.6, x1 = 0.3;
  std::vector<Violation> out;
  const auto constant = binomial_average_check([&](std::size_t) { return limit; }, limit, x1, n_max);
  for (std::size_t i = 0; i < constant.values.size(); ++i)
    if (std::abs(constant.values[i] - constant.limit) > 1e-12)
      out.push_back({"constant g at n=" + std::to_string(i + 1), constant.values[i], constant.limit});
  const auto decaying =
      binomial_average_check([&](std::size_t k) { return limit + 1.0 / static_cast<double>(k); }, limit, x1, n_max);
  for (std::size_t i = 0; i < decaying.values.size(); ++i)
    if (std::abs(decaying.values[i] - decaying.limit) > 1.0 / static_cast<double>(i + 1) + 1e-12)
      out.push_back({"g(k) = L + 1/k at n=" + std::to_string(i + 1), decaying.values[i], decaying.limit});
  return out;
}

std::vector<Violation> uniqueness_bracket(std::uint64_t, const SuiteConfig&) {
  const auto psi = canonical_state(ProbVector({0.7, 0.3}));
  const auto eps = [](std::size_t) { return 0.2; };
  const auto svn = uniqueness_experiment(psi, PureMeasure::svn, 10, eps);
  const auto s0 = uniqueness_experiment(psi, PureMeasure::s0, 10, eps);
  std::vector<Violation> out;
  for (const auto& row : svn.rows) {
    const std::string at = "(0.7, 0.3) eps 0.2 n=" + std::to_string(row.n);
    if (std::abs(row.value_per_n - svn.svn) > 1e-12) out.push_back({at + ": entropy per copy", row.value_per_n, svn.svn});
    if (row.n < 4) continue;
    const double nd = static_cast<double>(row.n);
    if (!row.log2a_over_n || !(std::abs(*row.log2a_over_n - svn.svn) < 0.2 + 2.0 / nd))
      out.push_back({at + ": distillation rate", row.log2a_over_n.value_or(std::nan("")), svn.svn});
    if (!row.log2b_over_n || !(std::abs(*row.log2b_over_n - svn.svn) < 0.2 + 1.0 / nd))
      out.push_back({at + ": cost rate", row.log2b_over_n.value_or(std::nan("")), svn.svn});
  }
  for (const auto& row : s0.rows)
    if (row.value_per_n != 1.0)
      out.push_back({"(0.7, 0.3) n=" + std::to_string(row.n) + ": Schmidt-rank measure per copy", row.value_per_n, 1.0});
  return out;
}

std::vector<Violation> uniqueness_renyi_pair(std::uint64_t, const SuiteConfig&) {
  std::vector<Violation> out;
  double previous = 2.0;
  for (std::size_t n = 2; n <= 3; ++n) {
    const auto c = renyi_counterexample(n);
    const double nd = static_cast<double>(n);
    const std::string at = "n=" + std::to_string(n);
    if (std::abs(c.sinf_near - nd) > 1e-12) out.push_back({at + ": min-entropy of the near state", c.sinf_near, nd});
    if (std::abs(c.sinf_uniform - 2.0 * nd) > 1e-12)
      out.push_back({at + ": min-entropy of the uniform state", c.sinf_uniform, 2.0 * nd});
    if (!(c.trace_distance < previous)) out.push_back({at + ": trace distance did not shrink", c.trace_distance, previous});
    previous = c.trace_distance;
  }
  return out;
}

// ---------------------------------------------------------------------------

std::size_t once(const SuiteConfig&) { return 1; }

const std::vector<SuiteCheck>& nielsen_checks() {
  static const std::vector<SuiteCheck> checks{
      {"nielsen.soundness", [](const SuiteConfig& c) { return c.nielsen_pairs; }, nielsen_soundness},
      {"nielsen.completeness", [](const SuiteConfig& c) { return c.nielsen_pairs; }, nielsen_completeness},
      {"nielsen.one_way_form", [](const SuiteConfig& c) { return std::max<std::size_t>(1, c.nielsen_pairs / 5); },
       nielsen_one_way_form},
      {"nielsen.entropy_monotone", [](const SuiteConfig& c) { return std::max<std::size_t>(1, c.nielsen_pairs / 2); },
       nielsen_entropy_monotone},
  };
  return checks;
}

const std::vector<SuiteCheck>& asymptotic_checks() {
  static const std::vector<SuiteCheck> checks{
      {"typical.exactness", once, typical_exactness},
      {"typical.interpolation", [](const SuiteConfig&) { return std::size_t{12}; }, typical_interpolation},
      {"typical.dilution_bracket", [](const SuiteConfig&) { return std::size_t{100}; }, typical_dilution_bracket},
      {"typical.protocols", [](const SuiteConfig&) { return std::size_t{6}; }, typical_protocols},
      {"regularization.fekete", once, regularization_fekete},
      {"regularization.binomial", once, regularization_binomial},
      {"uniqueness.bracket", once, uniqueness_bracket},
      {"uniqueness.renyi_pair", once, uniqueness_renyi_pair},
  };
  return checks;
}

const SuiteCheck* find_check(std::string_view name) {
  for (const auto* list : {&nielsen_checks(), &asymptotic_checks()})
    for (const auto& c : *list)
      if (c.name == name) return &c;
  return nullptr;
}

SamplerConfig seeded(SamplerConfig sampler, std::uint64_t seed) {
  sampler.seed = seed;
  return sampler;
}

AxiomCheckResult run_seeds(const SuiteCheck& check, const SuiteConfig& config, const std::vector<std::uint64_t>& seeds) {
  AxiomCheckResult out;
  out.axiom = check.name;
  out.measure = "-";
  out.tolerance = config.tolerance;
  for (std::uint64_t seed : seeds) {
    ++out.samples;
    try {
      for (auto& v : check.run(seed, config)) out.witnesses.push_back({seed, std::move(v.inputs), v.lhs, v.rhs});
    } catch (const Error& e) {
      out.witnesses.push_back({seed, std::string("error: ") + e.what(), std::nan(""), std::nan("")});
    }
  }
  out.outcome = out.witnesses.empty() ? Outcome::pass : Outcome::fail;
  return out;
}

AxiomCheckResult run_check(const SuiteCheck& check, const SuiteConfig& config) {
  std::vector<std::uint64_t> seeds;
  const auto sampler = seeded(config.sampler, config.seed);
  const std::size_t count = check.samples(config);
  for (std::size_t k = 0; k < count; ++k) seeds.push_back(sample_seed(sampler, check.name, k));
  return run_seeds(check, config, seeds);
}

bool expected_to_fail(std::string_view axiom, MeasureId m) {
  const bool continuity = axiom == "E3" || axiom == "E3'" || axiom == "P3";
  return continuity && (m == MeasureId::s0 || m == MeasureId::sinf);
}

void add_list(const std::vector<SuiteCheck>& list, std::vector<std::function<SuiteEntry()>>& jobs,
              const SuiteConfig& config) {
  for (const auto& c : list) jobs.push_back([&c, &config] { return SuiteEntry{run_check(c, config), Expectation::pass}; });
}

}  // namespace

std::string_view to_string(Mutation mutation) {
  switch (mutation) {
    case Mutation::none:
      return "none";
    case Mutation::drop_interpolation_normalization:
      return "drop_interpolation_normalization";
    case Mutation::drop_d_prefactor:
      return "drop_d_prefactor";
  }
  return "none";
}

std::optional<Mutation> parse_mutation(std::string_view name) {
  for (Mutation m : {Mutation::none, Mutation::drop_interpolation_normalization, Mutation::drop_d_prefactor})
    if (to_string(m) == name) return m;
  return std::nullopt;
}

std::string_view to_string(Expectation expectation) {
  switch (expectation) {
    case Expectation::pass:
      return "pass";
    case Expectation::fail:
      return "fail";
    case Expectation::not_fail:
      return "not_fail";
  }
  return "not_fail";
}

bool SuiteEntry::met() const {
  switch (expected) {
    case Expectation::pass:
      return result.outcome == Outcome::pass;
    case Expectation::fail:
      return result.outcome == Outcome::fail && !result.witnesses.empty();
    case Expectation::not_fail:
      return result.outcome != Outcome::fail;
  }
  return false;
}

bool SuiteReport::passed() const {
  return std::all_of(entries.begin(), entries.end(), [](const SuiteEntry& e) { return e.met(); });
}

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"axioms", "nielsen", "asymptotics", "all"};
  return names;
}

SuiteReport run_suite(std::string_view suite, const SuiteConfig& config) {
  if (std::find(suite_names().begin(), suite_names().end(), suite) == suite_names().end())
    throw PreconditionError("unknown suite '" + std::string(suite) + "'");
  const bool all = suite == "all";
  const auto sampler = seeded(config.sampler, config.seed);

  std::vector<std::function<SuiteEntry()>> jobs;
  if (all || suite == "nielsen") add_list(nielsen_checks(), jobs, config);
  if (all || suite == "asymptotics") add_list(asymptotic_checks(), jobs, config);
  const bool axioms = all || suite == "axioms";
  if (axioms)
    for (const auto& name : axiom_names())
      for (MeasureId m : registered_measures())
        jobs.push_back([name, m, &sampler, &config] {
          return SuiteEntry{check_axiom(name, m, sampler, config.tolerance),
                            expected_to_fail(name, m) ? Expectation::fail : Expectation::not_fail};
        });

  std::vector<SuiteEntry> entries(jobs.size());
  kernels::run_jobs(jobs.size(), config.execution, [&](std::size_t i) { entries[i] = jobs[i](); });

  if (axioms) {
    std::vector<AxiomCheckResult> known;
    for (const auto& e : entries) known.push_back(e.result);
    for (auto& r : lemma_implication_suite(sampler, known)) entries.push_back({std::move(r), Expectation::not_fail});
  }

  std::stable_sort(entries.begin(), entries.end(), [](const SuiteEntry& a, const SuiteEntry& b) {
    if (a.result.axiom != b.result.axiom) return a.result.axiom < b.result.axiom;
    return a.result.measure < b.result.measure;
  });
  return {std::string(suite), config.seed, config.mutation, std::move(entries)};
}

AxiomCheckResult replay(std::string_view check, std::string_view measure, std::uint64_t seed,
                        const SuiteConfig& config) {
  if (const auto* c = find_check(check)) return run_seeds(*c, config, {seed});
  const auto m = parse_measure_id(measure);
  if (!is_axiom(check) || !m)
    throw PreconditionError("replay: unknown check '" + std::string(check) + "' / '" + std::string(measure) + "'");
  return check_axiom_sample(check, *m, seed, seeded(config.sampler, config.seed), config.tolerance);
}

}  // namespace entkit
