#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "entkit/error.hpp"
#include "entkit/nielsen.hpp"
#include "entkit/rng.hpp"
#include "support.hpp"

using namespace entkit;
using entkit::test::max_abs_diff;

namespace {

ProbVector pv(std::vector<double> v) { return ProbVector(std::move(v)); }

PureBipartiteState random_state_with_spectrum(const ProbVector& p, std::size_t da, std::size_t db, Rng& rng) {
  const auto ua = random_unitary(da, rng), ub = random_unitary(db, rng);
  std::vector<double> coeffs(p.values().begin(), p.values().end());
  return state_from_schmidt(coeffs, ua, ub);
}

}  // namespace

TEST_CASE("equal spectra give the empty protocol") {
  const auto p = pv({0.6, 0.3, 0.1});
  CHECK(synthesize(p, p).steps.empty());
}

TEST_CASE("two-level example matches the hand calculation") {
  const auto proto = synthesize(pv({0.5, 0.5}), pv({0.7, 0.3}));
  REQUIRE(proto.steps.size() == 1);
  const auto& s = proto.steps[0];
  CHECK(s.j == 0);
  CHECK(s.k == 1);
  const std::vector<double> c_diag{std::sqrt(0.7), std::sqrt(0.3)};
  CHECK(max_abs_diff(s.c, ComplexMatrix::diagonal(c_diag)) < 1e-15);
  // D = sqrt(0.5) (sqrt(0.6)|2><1| + sqrt(1.4)|1><2|)
  ComplexMatrix d(2, 2);
  d(1, 0) = std::sqrt(0.5) * std::sqrt(0.6);
  d(0, 1) = std::sqrt(0.5) * std::sqrt(1.4);
  CHECK(max_abs_diff(s.d, d) < 1e-15);
  CHECK(s.u == ComplexMatrix::identity(2));
  CHECK(s.v == ComplexMatrix(2, 2, {0, 1, 1, 0}));
  // C^dagger C + D^dagger D = diag(0.7, 0.3) + diag(0.3, 0.7)
  CHECK(step_completeness_defect(s) < 1e-15);
}

TEST_CASE("uniform source to a four-level target") {
  const auto p = ProbVector::uniform(4), q = pv({0.4, 0.3, 0.2, 0.1});
  const auto proto = synthesize(p, q);
  CHECK(proto.steps.size() <= 3);
  Rng rng(1);
  const auto psi = random_state_with_spectrum(p, 4, 5, rng);
  const auto out = apply_protocol(proto, psi);
  CHECK(trace_distance(out, protocol_target(proto, psi).projector()) <= 1e-8);
}

TEST_CASE("step count never exceeds the number of open gaps") {
  Rng rng(2);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t m = 2 + trial % 5;
    const auto q = random_prob_vector(m, rng);
    const auto p = bistochastic_mix(q, 1 + trial % 4, rng);
    const auto proto = synthesize(p, q);
    const auto gaps = partial_sum_gaps(q, p);
    const auto open = std::count_if(gaps.begin(), gaps.end(), [](double g) { return g > 1e-13; });
    CHECK(proto.steps.size() <= static_cast<std::size_t>(open));
    CHECK(proto.steps.size() <= m - 1);
  }
}

TEST_CASE("soundness on random majorizing pairs") {
  Rng rng(3);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t m = 2 + trial % 5;
    const auto q = random_prob_vector(m, rng);
    const auto p = bistochastic_mix(q, 2, rng);
    const auto proto = synthesize(p, q);
    const auto psi = random_state_with_spectrum(p, m, m + trial % 2, rng);
    const auto out = apply_protocol(proto, psi);
    CHECK(trace_distance(out, protocol_target(proto, psi).projector()) <= 1e-8);
    for (const auto& s : proto.steps) {
      CHECK(step_completeness_defect(s) <= 1e-9);
      CHECK(step_operators_unitary(s, 1e-9));
    }
  }
}

TEST_CASE("intermediate spectra interpolate monotonically") {
  Rng rng(4);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t m = 2 + trial % 5;
    const auto q = random_prob_vector(m, rng);
    const auto p = bistochastic_mix(q, 3, rng);
    const auto proto = synthesize(p, q);
    double prev = test::entropy_bits({p.values().begin(), p.values().end()});
    for (const auto& s : proto.steps) {
      CHECK(majorizes(q, s.result));
      CHECK(majorizes(s.result, p));
      CHECK(majorizes(s.result, s.source));
      const double h = test::entropy_bits({s.result.values().begin(), s.result.values().end()});
      CHECK(h <= prev + 1e-10);
      prev = h;
    }
    if (!proto.steps.empty())
      for (std::size_t i = 0; i < m; ++i) CHECK(std::abs(proto.steps.back().result[i] - q[i]) < 1e-12);
  }
}

TEST_CASE("non-majorizing pairs are refused with the violated index") {
  try {
    synthesize(pv({0.7, 0.3}), pv({0.5, 0.5}));
    FAIL("expected refusal");
  } catch (const NotConvertibleError& e) {
    CHECK(e.index() == 1);
    CHECK(e.gap() == doctest::Approx(-0.2));
  }
  CHECK_THROWS_AS(synthesize(pv({0.5, 0.5}), pv({0.4, 0.3, 0.3})), NotConvertibleError);
}

TEST_CASE("apply_protocol checks the input spectrum") {
  const auto proto = synthesize(pv({0.5, 0.5}), pv({0.7, 0.3}));
  CHECK_THROWS_AS(apply_protocol(proto, canonical_state(pv({0.6, 0.4}))), SpectrumMismatchError);
  CHECK(apply_protocol(synthesize(pv({0.6, 0.4}), pv({0.6, 0.4})), canonical_state(pv({0.6, 0.4}))).matrix() ==
        canonical_state(pv({0.6, 0.4})).projector().matrix());
  // Bell to sqrt(0.7)|00> + sqrt(0.3)|11>.
  const auto bell = maximally_entangled(2);
  const auto out = apply_protocol(proto, bell);
  CHECK(trace_distance(out, protocol_target(proto, bell).projector()) <= 1e-8);
  const auto target = canonical_state(pv({0.7, 0.3}));
  CHECK(trace_distance(run_conversion(plan_conversion(bell, target), bell), target.projector()) <= 1e-8);
}

TEST_CASE("convertibility") {
  Rng rng(5);
  for (std::size_t d = 1; d <= 5; ++d)
    for (int t = 0; t < 5; ++t) {
      const auto phi = random_pure(d, d + 1, rng());
      CHECK(convertible(maximally_entangled(d + 1), embed(phi, d + 1, d + 1)));
    }
  const ComplexVector e0{1, 0};
  const auto product = product_state(e0, e0);
  CHECK(convertible(product, product_state(ComplexVector{0, 1}, e0)));
  CHECK_FALSE(convertible(product, maximally_entangled(2)));
  for (int t = 0; t < 50; ++t) {
    const auto x = random_pure(3, 3, rng()), y = random_pure(3, 3, rng());
    const bool both = convertible(x, y) && convertible(y, x);
    const auto sx = schmidt(x).coefficients, sy = schmidt(y).coefficients;
    bool equal = true;
    for (std::size_t i = 0; i < 3; ++i) equal = equal && std::abs(sx[i] - sy[i]) <= 2e-10;
    CHECK(both == equal);
  }
}

TEST_CASE("full conversion between concrete states") {
  Rng rng(6);
  for (int t = 0; t < 20; ++t) {
    const auto q = random_prob_vector(3, rng);
    const auto p = bistochastic_mix(q, 2, rng);
    const auto psi = random_state_with_spectrum(p, 3, 4, rng);
    const auto phi = random_state_with_spectrum(q, 3, 4, rng);
    const auto plan = plan_conversion(psi, phi);
    CHECK(trace_distance(run_conversion(plan, psi), phi.projector()) <= 1e-8);
  }
}

TEST_CASE("protocol as a one-way LQCC channel") {
  const auto proto = synthesize(ProbVector::uniform(4), pv({0.4, 0.3, 0.2, 0.1}));
  for (const auto& s : proto.steps) CHECK(flatten(step_as_one_way(s)).completeness_defect() <= 1e-9);
  const auto ch = protocol_channel(proto);
  CHECK(ch.ops().size() == (1u << proto.steps.size()));
  const auto out = apply(ch, maximally_entangled(4).projector());
  CHECK(trace_distance(out, canonical_state(pv({0.4, 0.3, 0.2, 0.1})).projector()) <= 1e-8);
}

TEST_CASE("mutated D prefactor breaks completeness") {
  const auto proto = synthesize(pv({0.5, 0.5}), pv({0.7, 0.3}), SynthesisOptions{.drop_d_prefactor = true});
  CHECK(step_completeness_defect(proto.steps[0]) > 1e-3);
  CHECK_THROWS_AS(apply_protocol(proto, maximally_entangled(2)), InvariantError);
}
