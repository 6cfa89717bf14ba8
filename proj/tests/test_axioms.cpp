#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "entkit/axioms.hpp"
#include "entkit/error.hpp"
#include "entkit/verify.hpp"

using namespace entkit;

namespace {

const SuiteEntry* find(const SuiteReport& r, std::string_view check, std::string_view measure = "-") {
  for (const auto& e : r.entries)
    if (e.result.axiom == check && e.result.measure == measure) return &e;
  return nullptr;
}

SuiteConfig quick() {
  SuiteConfig c;
  c.nielsen_pairs = 40;
  c.sampler.samples = 3;
  return c;
}

}  // namespace

TEST_CASE("axiom registry") {
  CHECK(axiom_names().size() == 24);
  CHECK(is_axiom("E6'"));
  CHECK(is_axiom("P5''"));
  CHECK_FALSE(is_axiom("E7"));
  CHECK_THROWS_AS(check_axiom("E7", MeasureId::svn), PreconditionError);
  for (MeasureId m : registered_measures()) CHECK(parse_measure_id(to_string(m)) == m);
  CHECK_FALSE(parse_measure_id("ed").has_value());
}

TEST_CASE("normalization holds for the closed forms and pure E_F") {
  for (MeasureId m : {MeasureId::svn, MeasureId::s0, MeasureId::sinf, MeasureId::ef_pure, MeasureId::ef}) {
    const auto r = check_axiom("E1", m);
    CHECK(r.outcome == Outcome::pass);
    CHECK(r.samples == 8);
    CHECK(r.tolerance == 1e-10);
  }
}

TEST_CASE("conditions outside a measure's domain are inconclusive") {
  const auto mixed_only = check_axiom("E6", MeasureId::s0);
  CHECK(mixed_only.outcome == Outcome::inconclusive);
  CHECK(mixed_only.samples == 0);
  CHECK(mixed_only.note.find("pure states") != std::string::npos);

  // Equalities cannot be confirmed from upper bounds.
  CHECK(check_axiom("E4", MeasureId::er).outcome == Outcome::inconclusive);
  CHECK(check_axiom("P1", MeasureId::er).outcome == Outcome::inconclusive);
  CHECK(check_axiom("E2'", MeasureId::ef).outcome == Outcome::inconclusive);
  // The limit conditions are never decided.
  CHECK(check_axiom("P5''", MeasureId::svn).outcome == Outcome::inconclusive);
}

TEST_CASE("inequality conditions on optimizer reports") {
  SamplerConfig sampler;
  sampler.samples = 4;
  for (MeasureId m : {MeasureId::ef, MeasureId::er}) {
    for (const char* axiom : {"E0", "E2", "E6", "E6'"}) {
      CAPTURE(axiom);
      CAPTURE(to_string(m));
      const auto r = check_axiom(axiom, m, sampler);
      CHECK(r.outcome == Outcome::pass);
      CHECK(r.tolerance == doctest::Approx(2e-3));
    }
  }
}

TEST_CASE("subadditivity on the joint system") {
  SamplerConfig sampler;
  sampler.samples = 1;
  CHECK(check_axiom("E5", MeasureId::er, sampler).outcome == Outcome::pass);
  CHECK(check_axiom("E5'", MeasureId::ef, sampler).outcome == Outcome::pass);
}

TEST_CASE("Schmidt-rank measure: monotone but not continuous") {
  CHECK(check_axiom("P2", MeasureId::s0).outcome == Outcome::pass);
  CHECK(check_axiom("P4", MeasureId::s0).outcome == Outcome::pass);
  const auto p3 = check_axiom("P3", MeasureId::s0);
  REQUIRE(p3.outcome == Outcome::fail);
  REQUIRE_FALSE(p3.witnesses.empty());
  CHECK(p3.witnesses.front().lhs == doctest::Approx(1.0 / 3.0));

  const auto sinf = check_axiom("P3", MeasureId::sinf);
  REQUIRE(sinf.outcome == Outcome::fail);
  CHECK(sinf.witnesses.front().inputs.find("4^n") != std::string::npos);
  CHECK(check_axiom("P3", MeasureId::svn).outcome == Outcome::inconclusive);
}

TEST_CASE("axiom checks are pure functions of their seed") {
  SamplerConfig sampler;
  sampler.seed = 11;
  sampler.samples = 5;
  const auto a = check_axiom("P2", MeasureId::sinf, sampler);
  const auto b = check_axiom("P2", MeasureId::sinf, sampler);
  CHECK(a.outcome == b.outcome);
  CHECK(a.samples == b.samples);

  const auto whole = check_axiom("E6", MeasureId::er, sampler);
  const auto single = check_axiom_sample("E6", MeasureId::er, sample_seed(sampler, "E6", 2), sampler);
  CHECK(single.samples == 1);
  CHECK(single.outcome == whole.outcome);
  CHECK(sample_seed(sampler, "E6", 2) != sample_seed(sampler, "E6", 3));
  CHECK(sample_seed(sampler, "E6", 2) != sample_seed(sampler, "E5", 2));
}

TEST_CASE("implication suite") {
  SamplerConfig sampler;
  sampler.samples = 2;
  const auto results = lemma_implication_suite(sampler);
  CHECK(results.size() > 30);
  for (const auto& r : results) {
    CAPTURE(r.axiom);
    CAPTURE(r.measure);
    CHECK(r.outcome != Outcome::fail);
  }
  auto outcome_of = [&](std::string_view name, std::string_view measure) {
    for (const auto& r : results)
      if (r.axiom == name && r.measure == measure) return r.outcome;
    return Outcome::fail;
  };
  CHECK(outcome_of("P1' P2 P4 imply P0 P1", "s0") == Outcome::pass);
  CHECK(outcome_of("regularization satisfies E4", "svn") == Outcome::pass);
  CHECK(outcome_of("regularization keeps convexity (g(k) = L + 1/k)", "-") == Outcome::pass);
  CHECK(outcome_of("E2 implies E0", "er") == Outcome::pass);
  // Hypotheses that only hold as equalities stay undecided for E_R.
  CHECK(outcome_of("P1' P2 P4 imply P0 P1", "er") == Outcome::inconclusive);
}

TEST_CASE("nielsen and asymptotics suites pass") {
  const auto config = quick();
  const auto nielsen = run_suite("nielsen", config);
  CHECK(nielsen.passed());
  CHECK(nielsen.entries.size() == 4);
  REQUIRE(find(nielsen, "nielsen.soundness"));
  CHECK(find(nielsen, "nielsen.soundness")->result.samples == 40);

  const auto asym = run_suite("asymptotics", config);
  CHECK(asym.passed());
  for (const auto& e : asym.entries) CHECK(e.result.outcome == Outcome::pass);
  CHECK_THROWS_AS(run_suite("everything", config), PreconditionError);
}

TEST_CASE("suite entries are sorted and reproducible") {
  auto config = quick();
  config.execution = kernels::Execution::parallel;
  const auto a = run_suite("asymptotics", config);
  config.execution = kernels::Execution::serial;
  const auto b = run_suite("asymptotics", config);
  REQUIRE(a.entries.size() == b.entries.size());
  for (std::size_t i = 0; i < a.entries.size(); ++i) {
    CHECK(a.entries[i].result.axiom == b.entries[i].result.axiom);
    CHECK(a.entries[i].result.samples == b.entries[i].result.samples);
  }
  CHECK(std::is_sorted(a.entries.begin(), a.entries.end(),
                       [](const SuiteEntry& x, const SuiteEntry& y) { return x.result.axiom < y.result.axiom; }));
}

TEST_CASE("dropping the D prefactor fails the Nielsen campaign with replayable witnesses") {
  auto config = quick();
  config.mutation = Mutation::drop_d_prefactor;
  const auto report = run_suite("nielsen", config);
  CHECK_FALSE(report.passed());
  const auto* soundness = find(report, "nielsen.soundness");
  REQUIRE(soundness);
  REQUIRE(soundness->result.outcome == Outcome::fail);
  const auto& w = soundness->result.witnesses.front();
  const auto again = replay("nielsen.soundness", "-", w.seed, config);
  CHECK(again.outcome == Outcome::fail);
  CHECK(again.witnesses.front().inputs == w.inputs);

  config.mutation = Mutation::none;
  CHECK(replay("nielsen.soundness", "-", w.seed, config).outcome == Outcome::pass);
}

TEST_CASE("dropping the interpolation normalization fails the asymptotics suite") {
  auto config = quick();
  config.mutation = Mutation::drop_interpolation_normalization;
  const auto report = run_suite("asymptotics", config);
  CHECK_FALSE(report.passed());
  const auto* entry = find(report, "typical.interpolation");
  REQUIRE(entry);
  REQUIRE(entry->result.outcome == Outcome::fail);
  const auto seed = entry->result.witnesses.front().seed;
  CHECK(replay("typical.interpolation", "-", seed, config).outcome == Outcome::fail);
  config.mutation = Mutation::none;
  CHECK(replay("typical.interpolation", "-", seed, config).outcome == Outcome::pass);
}

TEST_CASE("axioms suite expectations") {
  auto config = quick();
  config.sampler.samples = 2;
  const auto report = run_suite("axioms", config);
  CHECK(report.passed());
  const auto* s0 = find(report, "P3", "s0");
  REQUIRE(s0);
  CHECK(s0->expected == Expectation::fail);
  CHECK(s0->met());
  const auto* svn = find(report, "E1", "svn");
  REQUIRE(svn);
  CHECK(svn->result.outcome == Outcome::pass);
  CHECK(replay("P2", "s0", 123, config).outcome == Outcome::pass);
  CHECK_THROWS_AS(replay("P2", "ed", 1, config), PreconditionError);
}
