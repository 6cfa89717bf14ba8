#include <doctest.h>

#include <cmath>
#include <limits>

#include <omp.h>

#include "entkit/error.hpp"
#include "entkit/measures.hpp"
#include "entkit/nielsen.hpp"
#include "entkit/rng.hpp"
#include "support.hpp"

using namespace entkit;

namespace {

ProbVector pv(std::vector<double> v) { return ProbVector(std::move(v)); }

double h2(double x) { return test::entropy_bits({x, 1 - x}); }

DensityOperator werner(double p) {
  const auto bell = maximally_entangled(2).projector().matrix();
  return DensityOperator(bell * Complex(p) + ComplexMatrix::identity(4) * Complex((1 - p) / 4), 2, 2);
}

OptimizerBudget small_budget(std::uint64_t seed = 0) {
  OptimizerBudget b;
  b.restarts = 2;
  b.iterations = 40;
  b.seed = seed;
  return b;
}

}  // namespace

TEST_CASE("von Neumann entropy") {
  CHECK(von_neumann_entropy(random_pure(2, 3, 1).projector()) == doctest::Approx(0.0).epsilon(1e-12));
  for (std::size_t d : {2u, 3u, 4u}) CHECK(std::abs(von_neumann_entropy(DensityOperator::maximally_mixed(d, 2)) - std::log2(2.0 * d)) < 1e-12);
  const std::vector<double> diag{0.7, 0.3};
  const double expected = -0.7 * std::log2(0.7) - 0.3 * std::log2(0.3);
  CHECK(std::abs(von_neumann_entropy(ComplexMatrix::diagonal(diag)) - expected) < 1e-12);
  CHECK(expected == doctest::Approx(0.8813).epsilon(1e-4));
  for (std::uint64_t s = 0; s < 20; ++s) {
    const auto rho = random_density(2, 3, 1 + s % 6, s);
    const double v = von_neumann_entropy(rho);
    CHECK(v >= -1e-12);
    CHECK(v <= std::log2(6.0) + 1e-12);
  }
}

TEST_CASE("pure-state measures") {
  for (std::size_t d = 1; d <= 8; ++d) {
    const auto phi = maximally_entangled(d);
    for (auto m : {PureMeasure::svn, PureMeasure::s0, PureMeasure::sinf, PureMeasure::ef_pure})
      CHECK(std::abs(evaluate(m, phi) - std::log2(static_cast<double>(d))) <= 1e-10);
  }
  const ComplexVector e0{1, 0}, e1{0, 1};
  CHECK(reduced_entropy(product_state(e0, e1)) == 0.0);
  CHECK(renyi_zero(product_state(e0, e1)) == 0.0);

  const auto psi = canonical_state(pv({0.5, 0.25, 0.25}));
  CHECK(renyi_inf(psi) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(renyi_zero(psi) == doctest::Approx(std::log2(3.0)).epsilon(1e-14));
  CHECK(reduced_entropy(psi) == doctest::Approx(1.5).epsilon(1e-14));
  CHECK(entanglement_formation_pure(psi) == reduced_entropy(psi));
}

TEST_CASE("Renyi ordering on random pure states") {
  for (std::uint64_t s = 0; s < 500; ++s) {
    const auto psi = random_pure(2 + s % 3, 2 + s % 4, s);
    const double lo = renyi_inf(psi), mid = reduced_entropy(psi), hi = renyi_zero(psi);
    CHECK(lo <= mid + 1e-10);
    CHECK(mid <= hi + 1e-10);
  }
}

TEST_CASE("counterexample spectra for the infinity entropy") {
  for (int n : {2, 3}) {
    const double small = std::pow(4.0, -n), big = std::pow(2.0, -n);
    const std::size_t tail = static_cast<std::size_t>(std::pow(4.0, n) - std::pow(2.0, n));
    std::vector<double> psi{big};
    psi.insert(psi.end(), tail, small);
    const auto p = ProbVector(psi);
    CHECK(evaluate(PureMeasure::sinf, p) == doctest::Approx(n).epsilon(1e-12));
    CHECK(evaluate(PureMeasure::sinf, ProbVector::uniform(static_cast<std::size_t>(std::pow(4.0, n)))) ==
          doctest::Approx(2 * n).epsilon(1e-12));
  }
}

TEST_CASE("Schur concavity and monotonicity along protocols") {
  Rng rng(8);
  for (int t = 0; t < 200; ++t) {
    const auto q = random_prob_vector(2 + t % 5, rng);
    const auto p = bistochastic_mix(q, 3, rng);
    CHECK(shannon_entropy(q.values()) <= shannon_entropy(p.values()) + 1e-10);
    const auto proto = synthesize(p, q);
    CHECK(evaluate(PureMeasure::svn, proto.target) <= evaluate(PureMeasure::svn, proto.source) + 1e-10);
  }
}

TEST_CASE("relative entropy") {
  const auto rho = random_density(2, 2, 3, 1);
  CHECK(std::abs(relative_entropy(rho, rho)) < 1e-10);
  const std::vector<double> zero{1, 0}, one{0, 1};
  const DensityOperator p0(ComplexMatrix::diagonal(zero), 2, 1), p1(ComplexMatrix::diagonal(one), 2, 1);
  CHECK(relative_entropy(p0, DensityOperator::maximally_mixed(2, 1)) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(relative_entropy(p0, p1) == std::numeric_limits<double>::infinity());
  for (std::uint64_t s = 0; s < 20; ++s)
    CHECK(relative_entropy(random_density(2, 2, 4, s), random_density(2, 2, 4, s + 100)) >= -1e-9);
}

TEST_CASE("sandwich bounds") {
  const auto psi = random_pure(2, 3, 4);
  const auto sb = sandwich_bounds(psi.projector());
  CHECK(std::abs(sb.f - reduced_entropy(psi)) < 1e-10);
  CHECK(std::abs(sb.g - reduced_entropy(psi)) < 1e-10);
  const auto mm = sandwich_bounds(DensityOperator::maximally_mixed(2, 2));
  CHECK(mm.f == doctest::Approx(-1.0).epsilon(1e-12));
  CHECK(mm.g == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("Fannes bound") {
  const auto rho = random_density(2, 2, 3, 2);
  CHECK(fannes_bound(rho, rho) == 0.0);
  const std::vector<double> a{1, 0}, b{0.95, 0.05};
  const DensityOperator x(ComplexMatrix::diagonal(a), 2, 1), y(ComplexMatrix::diagonal(b), 2, 1);
  const double bound = fannes_bound(x, y);
  CHECK(bound == doctest::Approx(0.1 * 1.0 - 0.1 * std::log2(0.1)).epsilon(1e-12));
  CHECK(std::abs(von_neumann_entropy(y) - von_neumann_entropy(x)) <= bound);
  CHECK_THROWS_AS(fannes_bound(x, DensityOperator::maximally_mixed(2, 1)), PreconditionError);
}

TEST_CASE("relative entropy of entanglement") {
  const auto bell = relative_entropy_entanglement(maximally_entangled(2).projector());
  CHECK(bell.report.kind == ReportKind::upper_bound);
  CHECK(bell.report.value >= 1.0 - 1e-9);
  CHECK(bell.report.value <= 1.0 + 1e-3);
  CHECK(std::abs(relative_entropy(maximally_entangled(2).projector().matrix(), bell.witness.matrix()) -
                 bell.report.value) < 1e-12);

  const auto pure = canonical_state(pv({0.7, 0.3}));
  CHECK(std::abs(relative_entropy_entanglement(pure.projector()).report.value - h2(0.7)) <= 1e-3);

  // Werner states: E_R = 1 - h(F) with fidelity F = (1 + 3p)/4 > 1/2.
  for (double p : {0.4, 0.7}) {
    const double fid = (1 + 3 * p) / 4;
    const auto r = relative_entropy_entanglement(werner(p), small_budget());
    CHECK(r.report.value >= 1 - h2(fid) - 1e-9);
    CHECK(r.report.value <= 1 - h2(fid) + 1e-4);
  }
  for (std::uint64_t s = 0; s < 5; ++s)
    CHECK(relative_entropy_entanglement(random_separable(2, 2, 3, s), small_budget()).report.value <= 0.02);
}

TEST_CASE("entanglement of formation") {
  const auto bell = entanglement_formation_mixed(maximally_entangled(2).projector());
  CHECK(bell.report.kind == ReportKind::exact);
  CHECK(std::abs(bell.report.value - 1.0) <= 1e-6);

  // Werner states against the two-qubit concurrence formula.
  for (double p : {0.5, 0.8}) {
    const double c = (3 * p - 1) / 2;
    const double expected = h2((1 + std::sqrt(1 - c * c)) / 2);
    const auto r = entanglement_formation_mixed(werner(p), small_budget());
    CHECK(r.report.kind == ReportKind::upper_bound);
    CHECK(r.report.value >= expected - 1e-9);
    CHECK(r.report.value <= expected + 1e-4);
    CHECK(test::max_abs_diff(r.decomposition.matrix(), werner(p).matrix()) < 1e-10);
    CHECK(std::abs(r.decomposition.average_entropy() - r.report.value) < 1e-9);
  }
  for (std::uint64_t s = 0; s < 5; ++s)
    CHECK(entanglement_formation_mixed(random_separable(2, 2, 3, s), small_budget()).report.value <= 0.02);
}

TEST_CASE("optimizer reports respect the sandwich lower bound") {
  for (std::uint64_t s = 0; s < 10; ++s) {
    const auto rho = random_density(2, 2, 1 + s % 4, s);
    const double f = sandwich_bounds(rho).f;
    CHECK(relative_entropy_entanglement(rho, small_budget()).report.value >= f - 1e-6);
    CHECK(entanglement_formation_mixed(rho, small_budget()).report.value >= f - 1e-6);
  }
}

TEST_CASE("more restarts never report a larger value") {
  for (std::uint64_t s = 0; s < 4; ++s) {
    const auto rho = random_density(2, 2, 3, s);
    OptimizerBudget one = small_budget(s), two = small_budget(s);
    two.restarts = 4;
    CHECK(relative_entropy_entanglement(rho, two).report.value <= relative_entropy_entanglement(rho, one).report.value);
    CHECK(entanglement_formation_mixed(rho, two).report.value <= entanglement_formation_mixed(rho, one).report.value);
  }
}

TEST_CASE("warm starts are honoured") {
  const auto rho = random_density(2, 2, 3, 9);
  const auto first = relative_entropy_entanglement(rho, small_budget());
  OptimizerBudget tiny = small_budget(77);
  tiny.iterations = 1;
  tiny.restarts = 1;
  const std::vector<SeparableWitness> warm{first.witness};
  CHECK(relative_entropy_entanglement(rho, tiny, warm).report.value <= first.report.value + 1e-12);

  const auto ef = entanglement_formation_mixed(rho, small_budget());
  const std::vector<PureDecomposition> dec{ef.decomposition};
  CHECK(entanglement_formation_mixed(rho, tiny, dec).report.value <= ef.report.value + 1e-12);
  const std::vector<PureDecomposition> wrong{{{1.0}, {random_pure(2, 2, 1)}}};
  CHECK_THROWS_AS(entanglement_formation_mixed(rho, tiny, wrong), InvariantError);
}

TEST_CASE("subadditivity of E_R reports via witness products") {
  const auto x = random_density(2, 2, 2, 31), y = random_density(2, 2, 2, 32);
  const auto rx = relative_entropy_entanglement(x, small_budget()), ry = relative_entropy_entanglement(y, small_budget());
  OptimizerBudget b = small_budget();
  b.restarts = 1;
  b.iterations = 5;
  const std::vector<SeparableWitness> warm{tensor(rx.witness, ry.witness)};
  const auto joint = relative_entropy_entanglement(bipartite_tensor(x, y), b, warm);
  CHECK(joint.report.value <= rx.report.value + ry.report.value + 2e-3);
}

TEST_CASE("parallel restarts are bit-identical to serial") {
  const int saved = omp_get_max_threads();
  omp_set_num_threads(3);
  const auto rho = random_density(2, 2, 4, 5);
  OptimizerBudget serial = small_budget(3), parallel = small_budget(3);
  serial.restarts = parallel.restarts = 5;
  serial.execution = kernels::Execution::serial;
  parallel.execution = kernels::Execution::parallel;
  const auto a = relative_entropy_entanglement(rho, serial), b = relative_entropy_entanglement(rho, parallel);
  CHECK(a.report.value == b.report.value);
  CHECK(a.witness.matrix() == b.witness.matrix());
  const auto c = entanglement_formation_mixed(rho, serial), d = entanglement_formation_mixed(rho, parallel);
  CHECK(c.report.value == d.report.value);
  omp_set_num_threads(saved);
}
