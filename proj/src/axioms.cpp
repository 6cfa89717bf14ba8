#include "entkit/axioms.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <iomanip>
#include <limits>
#include <sstream>

#include "entkit/asymptotics.hpp"
#include "entkit/channels.hpp"
#include "entkit/error.hpp"
#include "entkit/majorization.hpp"
#include "entkit/nielsen.hpp"
#include "entkit/rng.hpp"
#include "entkit/tolerances.hpp"

namespace entkit {
namespace {

enum class Input { pure_sampled, pure_fixed, mixed_sampled, family, regularization };
enum class Sides { one, two };

struct AxiomInfo {
  std::string_view name;
  Input input;
  Sides sides;
  std::size_t sample_cap;  // upper limit for expensive joint-system checks
};

constexpr std::size_t kNoCap = std::numeric_limits<std::size_t>::max();

constexpr std::array<AxiomInfo, 24> kAxioms{{
    {"E0", Input::mixed_sampled, Sides::one, kNoCap},
    {"E1", Input::pure_fixed, Sides::two, kNoCap},
    {"E1'", Input::pure_fixed, Sides::two, kNoCap},
    {"E2", Input::mixed_sampled, Sides::one, kNoCap},
    {"E2'", Input::mixed_sampled, Sides::two, kNoCap},
    {"E2''", Input::mixed_sampled, Sides::two, kNoCap},
    {"E3", Input::family, Sides::two, kNoCap},
    {"E3'", Input::family, Sides::two, kNoCap},
    {"E4", Input::mixed_sampled, Sides::two, kNoCap},
    {"E4'", Input::mixed_sampled, Sides::two, kNoCap},
    {"E5", Input::mixed_sampled, Sides::one, 2},
    {"E5'", Input::mixed_sampled, Sides::one, 2},
    {"E5''", Input::regularization, Sides::two, kNoCap},
    {"E6", Input::mixed_sampled, Sides::one, kNoCap},
    {"E6'", Input::mixed_sampled, Sides::one, kNoCap},
    {"P0", Input::pure_sampled, Sides::one, kNoCap},
    {"P1", Input::pure_fixed, Sides::two, kNoCap},
    {"P1'", Input::pure_fixed, Sides::two, kNoCap},
    {"P2", Input::pure_sampled, Sides::one, kNoCap},
    {"P2'", Input::pure_sampled, Sides::two, kNoCap},
    {"P3", Input::family, Sides::two, kNoCap},
    {"P4", Input::pure_sampled, Sides::two, kNoCap},
    {"P4'", Input::pure_sampled, Sides::two, kNoCap},
    {"P5''", Input::regularization, Sides::two, kNoCap},
}};

const AxiomInfo& lookup(std::string_view name) {
  for (const auto& a : kAxioms)
    if (a.name == name) return a;
  throw PreconditionError("unknown axiom '" + std::string(name) + "'");
}

bool upper_bound_on_pure(MeasureId m) { return m == MeasureId::er; }
bool upper_bound_on_mixed(MeasureId m) { return m == MeasureId::er || m == MeasureId::ef; }

double optimizer_tolerance(MeasureId m) { return m == MeasureId::er ? tol::opt_er : tol::opt_ef_mixed; }

std::string fmt(double x) {
  std::ostringstream os;
  os << std::setprecision(17) << x;
  return os.str();
}

std::string fmt(std::span<const double> xs) {
  std::string s = "(";
  for (std::size_t i = 0; i < xs.size(); ++i) s += (i ? ", " : "") + fmt(xs[i]);
  return s + ")";
}

// ---------------------------------------------------------------------------
// Evaluation

double closed_form(MeasureId m, const SchmidtSpectrum& spectrum) {
  switch (m) {
    case MeasureId::s0:
      return evaluate(PureMeasure::s0, spectrum);
    case MeasureId::sinf:
      return evaluate(PureMeasure::sinf, spectrum);
    default:
      // Every other registered measure reduces to the entropy of
      // entanglement on pure states.
      return evaluate(PureMeasure::svn, spectrum);
  }
}

struct Evaluation {
  double value = 0.0;
  SeparableWitness witness;        // er only
  PureDecomposition decomposition;  // ef only
};

Evaluation evaluate_mixed(MeasureId m, const DensityOperator& rho, const OptimizerBudget& budget,
                          const SeparableWitness* warm_witness = nullptr,
                          const PureDecomposition* warm_decomposition = nullptr) {
  Evaluation out;
  if (m == MeasureId::er) {
    std::vector<SeparableWitness> warm;
    if (warm_witness) warm.push_back(*warm_witness);
    auto r = relative_entropy_entanglement(rho, budget, warm);
    out.value = r.report.value;
    out.witness = std::move(r.witness);
  } else {
    std::vector<PureDecomposition> warm;
    if (warm_decomposition) warm.push_back(*warm_decomposition);
    auto r = entanglement_formation_mixed(rho, budget, warm);
    out.value = r.report.value;
    out.decomposition = std::move(r.decomposition);
  }
  return out;
}

Evaluation evaluate_pure(MeasureId m, const PureBipartiteState& psi, const OptimizerBudget& budget) {
  if (m == MeasureId::er) return evaluate_mixed(m, psi.projector(), budget);
  Evaluation out;
  out.value = closed_form(m, schmidt(psi).spectrum());
  if (m == MeasureId::ef) out.decomposition = {{1.0}, {psi}};
  return out;
}

// ---------------------------------------------------------------------------
// Carrying optimizer certificates through the maps used by the checks. A
// transported certificate is a valid candidate for the image state, so the
// warm-started report obeys the inequality up to rounding.

ComplexVector apply_pair(const SeparableChannel::Pair& pair, const ComplexVector& amp, std::size_t da,
                         std::size_t db) {
  const ComplexMatrix coeff(da, db, amp);
  const ComplexMatrix out = pair.alice * coeff * pair.bob.transpose();
  return ComplexVector(out.data().begin(), out.data().end());
}

SeparableWitness transport(const SeparableWitness& w, const SeparableChannel& channel) {
  SeparableWitness out{channel.out().a, channel.out().b, {}};
  for (const auto& atom : w.atoms)
    for (const auto& pair : channel.pairs()) {
      auto a = pair.alice * atom.a;
      auto b = pair.bob * atom.b;
      const double na = norm(a), nb = norm(b);
      const double weight = atom.weight * na * na * nb * nb;
      if (weight <= tol::log_clamp) continue;
      for (auto& x : a) x /= na;
      for (auto& x : b) x /= nb;
      out.atoms.push_back({weight, std::move(a), std::move(b)});
    }
  return out;
}

PureDecomposition transport(const PureDecomposition& d, const SeparableChannel& channel) {
  PureDecomposition out;
  for (std::size_t i = 0; i < d.states.size(); ++i)
    for (const auto& pair : channel.pairs()) {
      auto amp = apply_pair(pair, d.states[i].amplitudes(), d.states[i].dim_a(), d.states[i].dim_b());
      const double n = norm(amp);
      const double weight = d.weights[i] * n * n;
      if (weight <= tol::log_clamp) continue;
      for (auto& x : amp) x /= n;
      out.weights.push_back(weight);
      out.states.emplace_back(std::move(amp), channel.out().a, channel.out().b);
    }
  return out;
}

PureDecomposition mix(double lambda, const PureDecomposition& x, const PureDecomposition& y) {
  PureDecomposition out;
  for (std::size_t i = 0; i < x.states.size(); ++i) {
    out.weights.push_back(lambda * x.weights[i]);
    out.states.push_back(x.states[i]);
  }
  for (std::size_t i = 0; i < y.states.size(); ++i) {
    out.weights.push_back((1.0 - lambda) * y.weights[i]);
    out.states.push_back(y.states[i]);
  }
  return out;
}

PureDecomposition tensor(const PureDecomposition& x, const PureDecomposition& y) {
  PureDecomposition out;
  for (std::size_t i = 0; i < x.states.size(); ++i)
    for (std::size_t j = 0; j < y.states.size(); ++j) {
      out.weights.push_back(x.weights[i] * y.weights[j]);
      out.states.push_back(bipartite_tensor(x.states[i], y.states[j]));
    }
  return out;
}

DensityOperator mixture(double lambda, const DensityOperator& x, const DensityOperator& y) {
  return DensityOperator(x.matrix() * Complex(lambda) + y.matrix() * Complex(1.0 - lambda), x.dim_a(), x.dim_b());
}

// ---------------------------------------------------------------------------
// Sampled inputs

struct Comparison {
  double lhs = 0.0;
  double rhs = 0.0;
  std::string inputs;
};

std::size_t pick(Rng& rng, std::size_t lo, std::size_t hi) {
  return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

PureBipartiteState state_with_spectrum(const ProbVector& p, std::size_t da, std::size_t db, Rng& rng) {
  return state_from_schmidt(p.values(), random_unitary(da, rng), random_unitary(db, rng));
}

/// Optimizer inputs stay at 2 x 2 so the joint systems of the tensor checks
/// remain 16-dimensional.
DensityOperator sample_mixed(Rng& rng) { return random_density(2, 2, pick(rng, 2, 4), rng()); }

/// The 16-dimensional joint systems get one seeded restart and a quarter of
/// the iterations; the transported certificate already bounds the report.
OptimizerBudget joint_budget(OptimizerBudget budget) {
  budget.restarts = 1;
  budget.iterations = std::max<std::size_t>(1, budget.iterations / 4);
  return budget;
}

std::pair<std::size_t, std::size_t> sample_pure_dims(MeasureId m, Rng& rng) {
  if (m == MeasureId::er) return {2, 2};
  return {pick(rng, 2, 3), pick(rng, 2, 3)};
}

/// Either independent local channels on each side, or a two-outcome
/// Nielsen step in random local bases, where Bob's correction depends on
/// Alice's outcome.
SeparableChannel sample_lqcc(Rng& rng) {
  if (pick(rng, 0, 1) == 0) return random_local_channel({2, 2}, {2, 2}, pick(rng, 1, 3), pick(rng, 1, 2), rng());
  const auto q = random_prob_vector(2, rng);
  const auto p = bistochastic_mix(q, 1, rng);
  const auto proto = synthesize(p, q);
  if (proto.steps.empty()) return random_local_channel({2, 2}, {2, 2}, 2, 1, rng());
  return step_channel(proto.steps.front(), random_unitary(2, rng), random_unitary(2, rng));
}

std::string describe(const DensityOperator& rho) {
  return std::to_string(rho.dim_a()) + "x" + std::to_string(rho.dim_b()) + " density (purity " +
         fmt(rho.purity()) + ")";
}

std::string describe(const PureBipartiteState& psi) {
  const auto s = schmidt(psi).spectrum();
  return std::to_string(psi.dim_a()) + "x" + std::to_string(psi.dim_b()) + " pure, Schmidt " + fmt(s.values());
}

std::vector<Comparison> mixed_sample(std::string_view axiom, MeasureId m, Rng& rng, const OptimizerBudget& budget) {
  if (axiom == "E0") {
    const std::size_t db = pick(rng, 2, 3);
    const auto sigma = random_separable(2, db, pick(rng, 1, 4), rng());
    return {{evaluate_mixed(m, sigma, budget).value, 0.0, "separable " + describe(sigma)}};
  }
  if (axiom == "E2") {
    const auto rho = sample_mixed(rng);
    const auto channel = sample_lqcc(rng);
    const auto before = evaluate_mixed(m, rho, budget);
    const auto image = apply(channel, rho);
    const auto w = transport(before.witness, channel);
    const auto d = transport(before.decomposition, channel);
    const auto after = evaluate_mixed(m, image, budget, m == MeasureId::er ? &w : nullptr,
                                      m == MeasureId::ef ? &d : nullptr);
    return {{after.value, before.value,
             describe(rho) + " under a local channel with " + std::to_string(channel.pairs().size()) +
                 " Kraus pairs"}};
  }
  if (axiom == "E5" || axiom == "E5'") {
    const auto rho = sample_mixed(rng);
    const auto sigma = axiom == "E5" ? sample_mixed(rng) : rho;
    const auto er = evaluate_mixed(m, rho, budget);
    const auto es = axiom == "E5" ? evaluate_mixed(m, sigma, budget) : er;
    const auto w = tensor(er.witness, es.witness);
    const auto d = tensor(er.decomposition, es.decomposition);
    const auto joint = evaluate_mixed(m, bipartite_tensor(rho, sigma), joint_budget(budget),
                                      m == MeasureId::er ? &w : nullptr,
                                      m == MeasureId::ef ? &d : nullptr);
    return {{joint.value, er.value + es.value, describe(rho) + " with " + describe(sigma)}};
  }
  if (axiom == "E6") {
    const auto rho = sample_mixed(rng);
    const auto sigma = sample_mixed(rng);
    const double lambda = std::uniform_real_distribution<double>(0.05, 0.95)(rng);
    const auto er = evaluate_mixed(m, rho, budget);
    const auto es = evaluate_mixed(m, sigma, budget);
    const auto w = mix(lambda, er.witness, es.witness);
    const auto d = mix(lambda, er.decomposition, es.decomposition);
    const auto mixed = evaluate_mixed(m, mixture(lambda, rho, sigma), budget, m == MeasureId::er ? &w : nullptr,
                                      m == MeasureId::ef ? &d : nullptr);
    return {{mixed.value, lambda * er.value + (1.0 - lambda) * es.value,
             "lambda " + fmt(lambda) + " between " + describe(rho) + " and " + describe(sigma)}};
  }
  if (axiom == "E6'") {
    const std::size_t count = pick(rng, 2, 3);
    const auto weights = random_simplex_point(count, rng);
    PureDecomposition parts;
    SeparableWitness witness{2, 2, {}};
    double average = 0.0;
    std::string inputs = "decomposition";
    for (std::size_t i = 0; i < count; ++i) {
      auto psi = random_pure(2, 2, rng());
      const auto e = evaluate_pure(m, psi, budget);
      average += weights[i] * e.value;
      for (const auto& atom : e.witness.atoms) witness.atoms.push_back({weights[i] * atom.weight, atom.a, atom.b});
      inputs += " " + fmt(weights[i]) + " x [" + describe(psi) + "]";
      parts.weights.push_back(weights[i]);
      parts.states.push_back(std::move(psi));
    }
    const DensityOperator rho(parts.matrix(), 2, 2);
    const auto e = evaluate_mixed(m, rho, budget, m == MeasureId::er ? &witness : nullptr,
                                  m == MeasureId::ef ? &parts : nullptr);
    return {{e.value, average, inputs}};
  }
  throw PreconditionError("axiom " + std::string(axiom) + " has no mixed-state sampler");
}

std::vector<Comparison> pure_sample(std::string_view axiom, MeasureId m, Rng& rng, const OptimizerBudget& budget) {
  const auto [da, db] = sample_pure_dims(m, rng);
  if (axiom == "P0") {
    const auto a = random_unit_vector(da, rng);
    const auto b = random_unit_vector(db, rng);
    const auto psi = product_state(a, b);
    return {{evaluate_pure(m, psi, budget).value, 0.0, "product " + describe(psi)}};
  }
  if (axiom == "P2") {
    const std::size_t rank = pick(rng, 2, std::min(da, db));
    const auto q = random_prob_vector(rank, rng);
    const auto p = bistochastic_mix(q, 2, rng);
    const auto psi = state_with_spectrum(p, da, db, rng);
    const auto phi = state_with_spectrum(q, da, db, rng);
    return {{evaluate_pure(m, phi, budget).value, evaluate_pure(m, psi, budget).value,
             "source Schmidt " + fmt(p.values()) + " to target " + fmt(q.values())}};
  }
  if (axiom == "P2'") {
    const auto psi = random_pure(da, db, rng());
    const auto moved = apply_local_unitaries(psi, random_unitary(da, rng), random_unitary(db, rng));
    const auto wider = embed(moved, da + pick(rng, 0, 1), db + pick(rng, 0, 1));
    return {{evaluate_pure(m, wider, budget).value, evaluate_pure(m, psi, budget).value,
             describe(psi) + " moved by local unitaries into " + std::to_string(wider.dim_a()) + "x" +
                 std::to_string(wider.dim_b())}};
  }
  if (axiom == "P4" || axiom == "P4'") {
    const std::size_t small_a = std::min<std::size_t>(da, 2);
    const auto psi = random_pure(small_a, db, rng());
    const std::size_t copies = axiom == "P4" ? 2 : pick(rng, 2, 3);
    const double joint = evaluate_pure(m, tensor_power(psi, copies), budget).value;
    return {{joint / static_cast<double>(copies), evaluate_pure(m, psi, budget).value,
             std::to_string(copies) + " copies of " + describe(psi)}};
  }
  throw PreconditionError("axiom " + std::string(axiom) + " has no pure-state sampler");
}

std::vector<Comparison> fixed_cases(std::string_view axiom, MeasureId m, const OptimizerBudget& budget) {
  std::vector<Comparison> out;
  const bool normalization_only = axiom == "E1'" || axiom == "P1'";
  for (std::size_t d = normalization_only ? 2 : 1; d <= (normalization_only ? 2 : 8); ++d) {
    out.push_back({evaluate_pure(m, maximally_entangled(d), budget).value, std::log2(static_cast<double>(d)),
                   "maximally entangled d=" + std::to_string(d)});
  }
  return out;
}

// ---------------------------------------------------------------------------
// Convergent families for the continuity conditions

struct FamilyPoint {
  std::size_t n = 0;
  double quotient = 0.0;
  double distance = 0.0;
};

struct FamilyTrend {
  std::string name;
  std::vector<FamilyPoint> points;
};

double quotient(MeasureId m, const ProbVector& x, const ProbVector& y, double log2_dim) {
  return std::abs(closed_form(m, x) - closed_form(m, y)) / (1.0 + log2_dim);
}

std::vector<FamilyTrend> continuity_families(MeasureId m) {
  std::vector<FamilyTrend> out;

  // A 2 x 2 state whose second Schmidt coefficient 4^-n vanishes, against
  // the product state.
  FamilyTrend vanishing{"vanishing Schmidt coefficient", {}};
  for (std::size_t n = 1; n <= 8; ++n) {
    const double small = std::ldexp(1.0, -2 * static_cast<int>(n));
    const ProbVector x({1.0 - small, small});
    const ProbVector y({1.0});
    vanishing.points.push_back({n, quotient(m, x, y, 2.0), 2.0 * std::sqrt(small)});
  }
  out.push_back(std::move(vanishing));

  // Growing-dimension pair on 4^n x 4^n with equal-mass tails.
  FamilyTrend growing{"near-uniform versus uniform on 4^n terms", {}};
  for (std::size_t n = 1; n <= 6; ++n) {
    const auto c = renyi_counterexample(n);
    growing.points.push_back({n, quotient(m, c.near, c.uniform, 4.0 * static_cast<double>(n)), c.trace_distance});
  }
  out.push_back(std::move(growing));

  // n copies of (0.9, 0.1) against the normalized typical projection.
  FamilyTrend typical{"copies versus typical projection of (0.9, 0.1), eps 0.3", {}};
  const ProbVector q({0.9, 0.1});
  for (std::size_t n = 1; n <= 14; ++n) {
    const auto typ = typical_set(q, n, 0.3, {TypicalMode::type_class, 1'000'000, kernels::Execution::serial});
    if (typ.size == 0) continue;
    std::vector<double> copies{1.0};
    for (std::size_t k = 0; k < n; ++k) {
      std::vector<double> next;
      next.reserve(copies.size() * 2);
      for (double a : copies)
        for (double b : q.values()) next.push_back(a * b);
      copies = std::move(next);
    }
    const double p = typ.total_probability();
    typical.points.push_back({n, quotient(m, ProbVector::from_unsorted(copies), interpolating_spectrum(typ),
                                          2.0 * static_cast<double>(n)),
                              2.0 * std::sqrt(std::max(0.0, 1.0 - p))});
  }
  out.push_back(std::move(typical));
  return out;
}

/// The quotient must shrink along with the distance. A family whose
/// distance halves while the quotient stays above 0.1 and above half its
/// first value is taken as a counterexample.
bool trend_fails(const FamilyTrend& f) {
  if (f.points.size() < 2) return false;
  const auto& first = f.points.front();
  const auto& last = f.points.back();
  return last.distance <= first.distance / 2.0 && last.quotient >= 0.1 && last.quotient >= first.quotient / 2.0;
}

// ---------------------------------------------------------------------------

std::uint64_t name_hash(std::string_view s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

struct Verdict {
  bool decided = true;
  std::string reason;
};

Verdict applicability(const AxiomInfo& info, MeasureId m) {
  const bool mixed_input = info.input == Input::mixed_sampled || (info.input == Input::regularization && info.name[0] == 'E');
  if (mixed_input && !accepts_mixed(m)) return {false, "measure is defined on pure states only"};
  if (info.input == Input::regularization) return {false, "existence of a limit is not decidable from a finite prefix"};
  if (info.input == Input::family && m == MeasureId::er)
    return {false, "optimizer reports are not evaluated on the growing-dimension families"};
  if (info.sides == Sides::two) {
    const bool bounded = mixed_input ? upper_bound_on_mixed(m) : upper_bound_on_pure(m);
    if (bounded) return {false, "two-sided condition on upper-bound reports"};
  }
  return {};
}

double effective_tolerance(const AxiomInfo& info, MeasureId m, double tolerance) {
  const bool mixed_input = info.input == Input::mixed_sampled;
  const bool bounded = mixed_input ? upper_bound_on_mixed(m) : upper_bound_on_pure(m);
  return bounded ? 2.0 * optimizer_tolerance(m) : tolerance;
}

bool violates(const Comparison& c, Sides sides, double tol) {
  if (!std::isfinite(c.lhs) || !std::isfinite(c.rhs)) return true;
  return sides == Sides::one ? c.lhs > c.rhs + tol : std::abs(c.lhs - c.rhs) > tol;
}

std::vector<Comparison> draw(const AxiomInfo& info, MeasureId m, std::uint64_t seed, const SamplerConfig& sampler) {
  Rng rng(seed);
  if (info.input == Input::mixed_sampled) return mixed_sample(info.name, m, rng, sampler.budget);
  return pure_sample(info.name, m, rng, sampler.budget);
}

void record_sample(AxiomCheckResult& out, const AxiomInfo& info, MeasureId m, std::uint64_t seed,
                   const SamplerConfig& sampler) {
  ++out.samples;
  try {
    for (const auto& c : draw(info, m, seed, sampler))
      if (violates(c, info.sides, out.tolerance)) out.witnesses.push_back({seed, c.inputs, c.lhs, c.rhs});
  } catch (const Error& e) {
    out.witnesses.push_back({seed, std::string("error: ") + e.what(), std::nan(""), std::nan("")});
  }
}

AxiomCheckResult run_check(const AxiomInfo& info, MeasureId m, const SamplerConfig& sampler, double tolerance,
                           const std::vector<std::uint64_t>& seeds) {
  AxiomCheckResult out;
  out.axiom = std::string(info.name);
  out.measure = std::string(to_string(m));
  out.tolerance = effective_tolerance(info, m, tolerance);

  const auto verdict = applicability(info, m);
  if (!verdict.decided) {
    out.note = verdict.reason;
    return out;
  }

  if (info.input == Input::pure_fixed) {
    for (const auto& c : fixed_cases(info.name, m, sampler.budget)) {
      ++out.samples;
      if (violates(c, info.sides, out.tolerance)) out.witnesses.push_back({0, c.inputs, c.lhs, c.rhs});
    }
  } else if (info.input == Input::family) {
    for (const auto& f : continuity_families(m)) {
      out.samples += f.points.size();
      if (trend_fails(f)) {
        const auto& last = f.points.back();
        out.witnesses.push_back({0,
                                 f.name + ": n=" + std::to_string(last.n) + " trace distance " + fmt(last.distance) +
                                     " but quotient " + fmt(last.quotient),
                                 last.quotient, 0.0});
      }
    }
    out.outcome = out.witnesses.empty() ? Outcome::inconclusive : Outcome::fail;
    out.note = "trend test on constructed convergent families";
    return out;
  } else {
    for (std::uint64_t seed : seeds) record_sample(out, info, m, seed, sampler);
  }
  out.outcome = out.witnesses.empty() ? Outcome::pass : Outcome::fail;
  return out;
}

}  // namespace

std::string_view to_string(Outcome outcome) {
  switch (outcome) {
    case Outcome::pass:
      return "pass";
    case Outcome::fail:
      return "fail";
    case Outcome::inconclusive:
      return "inconclusive";
  }
  return "inconclusive";
}

std::string_view to_string(MeasureId measure) {
  switch (measure) {
    case MeasureId::svn:
      return "svn";
    case MeasureId::s0:
      return "s0";
    case MeasureId::sinf:
      return "sinf";
    case MeasureId::ef_pure:
      return "ef_pure";
    case MeasureId::ef:
      return "ef";
    case MeasureId::er:
      return "er";
  }
  return "svn";
}

std::optional<MeasureId> parse_measure_id(std::string_view name) {
  for (MeasureId m : registered_measures())
    if (to_string(m) == name) return m;
  return std::nullopt;
}

const std::vector<MeasureId>& registered_measures() {
  static const std::vector<MeasureId> all{MeasureId::svn, MeasureId::s0, MeasureId::sinf,
                                          MeasureId::ef_pure, MeasureId::ef, MeasureId::er};
  return all;
}

bool accepts_mixed(MeasureId measure) { return measure == MeasureId::ef || measure == MeasureId::er; }

const std::vector<std::string>& axiom_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> v;
    for (const auto& a : kAxioms) v.emplace_back(a.name);
    return v;
  }();
  return names;
}

bool is_axiom(std::string_view name) {
  return std::any_of(kAxioms.begin(), kAxioms.end(), [&](const AxiomInfo& a) { return a.name == name; });
}

std::uint64_t sample_seed(const SamplerConfig& sampler, std::string_view axiom, std::size_t k) {
  return derive_seed(derive_seed(sampler.seed, name_hash(axiom)), k);
}

AxiomCheckResult check_axiom(std::string_view axiom, MeasureId measure, const SamplerConfig& sampler,
                             double tolerance) {
  const auto& info = lookup(axiom);
  std::vector<std::uint64_t> seeds;
  const std::size_t count = std::min(sampler.samples, info.sample_cap);
  for (std::size_t k = 0; k < count; ++k) seeds.push_back(sample_seed(sampler, axiom, k));
  return run_check(info, measure, sampler, tolerance, seeds);
}

AxiomCheckResult check_axiom_sample(std::string_view axiom, MeasureId measure, std::uint64_t seed,
                                    const SamplerConfig& sampler, double tolerance) {
  return run_check(lookup(axiom), measure, sampler, tolerance, {seed});
}

// ---------------------------------------------------------------------------
// Implications

namespace {

bool holds(const AxiomCheckResult& r) { return r.outcome == Outcome::pass; }

AxiomCheckResult implication(std::string name, MeasureId m, const std::vector<AxiomCheckResult>& hypotheses,
                             const std::vector<AxiomCheckResult>& conclusions) {
  AxiomCheckResult out;
  out.axiom = std::move(name);
  out.measure = std::string(to_string(m));
  for (const auto& h : hypotheses) out.samples += h.samples;
  for (const auto& c : conclusions) out.samples += c.samples;
  if (!conclusions.empty()) out.tolerance = conclusions.front().tolerance;
  for (const auto& h : hypotheses)
    if (!holds(h)) {
      out.note = "hypothesis " + h.axiom + " not established (" + std::string(to_string(h.outcome)) + ")";
      return out;
    }
  for (const auto& c : conclusions) {
    if (c.outcome == Outcome::fail) {
      out.outcome = Outcome::fail;
      out.witnesses.insert(out.witnesses.end(), c.witnesses.begin(), c.witnesses.end());
      out.note = "conclusion " + c.axiom + " failed";
      return out;
    }
    if (c.outcome == Outcome::inconclusive) {
      out.note = "conclusion " + c.axiom + " inconclusive";
      return out;
    }
  }
  out.outcome = Outcome::pass;
  return out;
}

AxiomCheckResult scalar_result(std::string name, bool ok, std::size_t samples, double tolerance, std::string inputs,
                               double lhs, double rhs) {
  AxiomCheckResult out;
  out.axiom = std::move(name);
  out.measure = "-";
  out.samples = samples;
  out.tolerance = tolerance;
  out.outcome = ok ? Outcome::pass : Outcome::fail;
  if (!ok) out.witnesses.push_back({0, std::move(inputs), lhs, rhs});
  return out;
}

/// Per-copy value of psi^{(x)n} at the largest n, standing in for the
/// regularized measure. The measures involved are additive on pure states,
/// so the prefix is constant and the estimate is exact up to rounding.
double regularized(MeasureId m, const PureBipartiteState& psi, std::size_t n_max) {
  const auto trace = regularize([&](std::size_t n) { return closed_form(m, schmidt(tensor_power(psi, n)).spectrum()); },
                                n_max, true, 1e-10);
  return trace.limit_estimate;
}

}  // namespace

std::vector<AxiomCheckResult> lemma_implication_suite(const SamplerConfig& sampler) {
  return lemma_implication_suite(sampler, {});
}

std::vector<AxiomCheckResult> lemma_implication_suite(const SamplerConfig& sampler,
                                                      std::span<const AxiomCheckResult> known) {
  std::vector<AxiomCheckResult> out;
  const double tol = 1e-10;
  std::vector<AxiomCheckResult> cache(known.begin(), known.end());
  auto check = [&](std::string_view axiom, MeasureId m) {
    for (const auto& r : cache)
      if (r.axiom == axiom && r.measure == to_string(m)) return r;
    cache.push_back(check_axiom(axiom, m, sampler, tol));
    return cache.back();
  };
  const std::vector<MeasureId> closed{MeasureId::svn, MeasureId::s0, MeasureId::sinf, MeasureId::ef_pure};

  for (MeasureId m : registered_measures()) {
    if (accepts_mixed(m)) {
      out.push_back(implication("E2 implies E2'", m, {check("E2", m)}, {check("E2'", m)}));
      out.push_back(implication("E2 implies E0", m, {check("E2", m)}, {check("E0", m)}));
      out.push_back(implication("E6' implies E0", m, {check("E6'", m)}, {check("E0", m)}));
    } else {
      out.push_back(implication("P2 implies P2'", m, {check("P2", m)}, {check("P2'", m)}));
    }
    {
      // Either side of the equivalence is tested as the hypothesis of the other.
      const auto p4 = check("P4", m);
      const auto p4a = check("P4'", m);
      out.push_back(implication("P4 implies P4'", m, {p4}, {p4a}));
      out.push_back(implication("P4' implies P4", m, {p4a}, {p4}));
    }
    out.push_back(implication("P1' P2 P4 imply P0 P1", m,
                              {check("P1'", m), check("P2", m), check("P4", m)},
                              {check("P0", m), check("P1", m)}));
  }

  // Subadditive sequences: the per-copy values converge to their infimum.
  {
    const std::size_t n_max = 60;
    const auto linear = regularize([](std::size_t n) { return static_cast<double>(n) + 1.0; }, n_max, true);
    const double gap = linear.limit_estimate - 1.0;
    bool monotone = true;
    for (std::size_t i = 1; i < linear.values.size(); ++i)
      monotone = monotone && linear.values[i].running_infimum <= linear.values[i - 1].running_infimum;
    out.push_back(scalar_result("E5' implies E5'' (f(n) = n + 1)",
                                linear.is_subadditive_certified && monotone && gap >= 0.0 &&
                                    gap <= 1.0 / static_cast<double>(n_max) + 1e-12,
                                n_max, 1.0 / static_cast<double>(n_max), "per-copy estimate at n=60",
                                linear.limit_estimate, 1.0));
    const double x = 0.8;
    const auto geometric = regularize(
        [x](std::size_t n) { return static_cast<double>(n) * std::pow(x, static_cast<double>(n)); }, n_max, true);
    out.push_back(scalar_result("E5' implies E5'' (f(n) = n x^n)",
                                geometric.is_subadditive_certified && geometric.limit_estimate <= std::pow(x, 59.0),
                                n_max, 0.0, "per-copy estimate at n=60", geometric.limit_estimate, 0.0));
  }

  // Regularized closed forms on pure states.
  for (MeasureId m : closed) {
    Rng rng(derive_seed(sampler.seed, name_hash("regularization") + static_cast<std::uint64_t>(m)));
    const auto psi = random_pure(2, 2, rng());
    const auto phi = random_pure(2, 2, rng());
    const double e_psi = regularized(m, psi, 4);
    const double e_phi = regularized(m, phi, 4);
    const double e_joint = regularized(m, bipartite_tensor(psi, phi), 2);
    const double e_pair = regularized(m, tensor_power(psi, 2), 2);

    AxiomCheckResult additive = scalar_result("regularization satisfies E4", std::abs(e_pair - 2.0 * e_psi) <= tol, 1,
                                              tol, "two copies of " + describe(psi), e_pair, 2.0 * e_psi);
    additive.measure = std::string(to_string(m));
    out.push_back(std::move(additive));

    AxiomCheckResult sub = scalar_result("regularization satisfies E5", e_joint <= e_psi + e_phi + tol, 1, tol,
                                         describe(psi) + " with " + describe(phi), e_joint, e_psi + e_phi);
    sub.measure = std::string(to_string(m));
    out.push_back(std::move(sub));

    const double e_bell = regularized(m, maximally_entangled(2), 4);
    const double e_product = regularized(m, product_state(ComplexVector{1.0, 0.0}, ComplexVector{0.0, 1.0}), 4);
    AxiomCheckResult normal =
        scalar_result("regularization satisfies E0 and E1'", std::abs(e_bell - 1.0) <= tol && std::abs(e_product) <= tol,
                      2, tol, "Bell and product", e_bell, e_product);
    normal.measure = std::string(to_string(m));
    out.push_back(std::move(normal));

    const auto q = random_prob_vector(2, rng);
    const auto p = bistochastic_mix(q, 2, rng);
    const double e_source = regularized(m, canonical_state(p), 4);
    const double e_target = regularized(m, canonical_state(q), 4);
    AxiomCheckResult mono =
        scalar_result("regularization satisfies P2", e_target <= e_source + tol, 1, tol,
                      "source " + fmt(p.values()) + " target " + fmt(q.values()), e_target, e_source);
    mono.measure = std::string(to_string(m));
    out.push_back(std::move(mono));
  }

  // Convexity of a regularization reduces to binomial averaging of the
  // per-copy values.
  {
    const std::size_t n_max = 60;
    const double limit = 0.75, x1 = 0.35;
    const auto constant = binomial_average_check([&](std::size_t) { return limit; }, limit, x1, n_max);
    double worst_constant = 0.0;
    for (double v : constant.values) worst_constant = std::max(worst_constant, std::abs(v - constant.limit));
    out.push_back(scalar_result("regularization keeps convexity (constant g)", worst_constant <= 1e-12, n_max, 1e-12,
                                "g(k) = 0.75, x1 = 0.35", constant.limit + worst_constant, constant.limit));

    const auto decaying = binomial_average_check(
        [&](std::size_t k) { return limit + 1.0 / static_cast<double>(k); }, limit, x1, n_max);
    bool within = true;
    double worst = 0.0;
    for (std::size_t i = 0; i < decaying.values.size(); ++i) {
      const double diff = std::abs(decaying.values[i] - decaying.limit);
      worst = std::max(worst, diff * static_cast<double>(i + 1));
      within = within && diff <= 1.0 / static_cast<double>(i + 1) + 1e-12;
    }
    out.push_back(scalar_result("regularization keeps convexity (g(k) = L + 1/k)", within, n_max, 1.0 / 60.0,
                                "largest n * |average - x1 L|", worst, 1.0));
  }
  return out;
}

}  // namespace entkit
