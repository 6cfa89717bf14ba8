#include <doctest.h>

#include <cmath>

#include <omp.h>

#include "entkit/asymptotics.hpp"
#include "entkit/channels.hpp"
#include "entkit/error.hpp"
#include "entkit/rng.hpp"
#include "entkit/tolerances.hpp"
#include "support.hpp"

using namespace entkit;

namespace {

TypicalOptions forced(TypicalMode mode) {
  TypicalOptions o;
  o.mode = mode;
  return o;
}

// Two-symbol typical set by the binomial formula in floating point.
struct BinomialOracle {
  double mass = 0.0;
  double size = 0.0;
};

BinomialOracle binomial_oracle(double q0, std::size_t n, double eps) {
  const double q1 = 1 - q0;
  const double s = -q0 * std::log2(q0) - q1 * std::log2(q1);
  BinomialOracle out;
  for (std::size_t k = 0; k <= n; ++k) {
    const double l = k * std::log2(q0) + (n - k) * std::log2(q1);
    if (l < -(s + eps) * n - 1e-12 || l > -(s - eps) * n + 1e-12) continue;
    const double c = std::round(std::exp(std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0)));
    out.size += c;
    out.mass += c * std::pow(q0, k) * std::pow(q1, n - k);
  }
  return out;
}

double overlap_sq(const PureBipartiteState& x, const PureBipartiteState& y) {
  Complex s{};
  for (std::size_t i = 0; i < x.amplitudes().size(); ++i) s += std::conj(x.amplitudes()[i]) * y.amplitudes()[i];
  return std::norm(s);
}

}  // namespace

TEST_CASE("uniform spectrum makes every index typical") {
  for (std::size_t n = 1; n <= 8; ++n) {
    const auto typ = typical_set(ProbVector::uniform(2), n, 0.1);
    CHECK(typ.probability == 1);
    CHECK(typ.size == (BigInt(1) << n));
    CHECK(typ.meets_mass_bound());
  }
}

TEST_CASE("type classes and exhaustive enumeration agree exactly") {
  const ProbVector q({0.9, 0.1});
  const auto x = typical_set(q, 10, 0.3, forced(TypicalMode::exhaustive));
  const auto y = typical_set(q, 10, 0.3, forced(TypicalMode::type_class));
  CHECK(x.mode == TypicalMode::exhaustive);
  CHECK(y.mode == TypicalMode::type_class);
  CHECK(x.probability == y.probability);
  CHECK(x.size == y.size);
  REQUIRE(x.classes.size() == y.classes.size());
  for (std::size_t i = 0; i < x.classes.size(); ++i) {
    CHECK(x.classes[i].counts == y.classes[i].counts);
    CHECK(x.classes[i].multiplicity == y.classes[i].multiplicity);
  }
  const auto oracle = binomial_oracle(0.9, 10, 0.3);
  CHECK(std::abs(x.total_probability() - oracle.mass) < 1e-12);
  CHECK(x.size.convert_to<double>() == oracle.size);

  const ProbVector r({0.5, 0.3, 0.2});
  for (std::size_t n = 1; n <= 8; ++n)
    for (double eps : {0.05, 0.2, 0.4}) {
      const auto a = typical_set(r, n, eps, forced(TypicalMode::exhaustive));
      const auto b = typical_set(r, n, eps, forced(TypicalMode::type_class));
      CHECK(a.probability == b.probability);
      CHECK(a.size == b.size);
    }
}

TEST_CASE("typical-set invariants") {
  Rng rng(12);
  for (int t = 0; t < 40; ++t) {
    const auto q = random_prob_vector(2 + t % 3, rng);
    const std::size_t n = 1 + t % 9;
    const double eps = 0.05 + 0.01 * t;
    const auto typ = typical_set(q, n, eps);
    const double lo = -static_cast<double>(n) * (typ.entropy + eps), hi = -static_cast<double>(n) * (typ.entropy - eps);
    BigInt total = 0;
    for (const auto& c : typ.classes) {
      CHECK(c.log2_probability >= lo - 1e-12);
      CHECK(c.log2_probability <= hi + 1e-12);
      total += c.multiplicity;
    }
    CHECK(total == typ.size);
    if (typ.size > 0) CHECK(typ.log2_size() <= n * (typ.entropy + eps) + 1e-12);
    CHECK(typ.meets_mass_bound() == (typ.total_probability() >= 1 - eps));
  }
}

TEST_CASE("membership is monotone in epsilon") {
  const ProbVector q({0.6, 0.3, 0.1});
  const auto small = typical_set(q, 7, 0.1), large = typical_set(q, 7, 0.3);
  for (const auto& c : small.classes) CHECK(large.contains(c.counts));
  CHECK(small.probability <= large.probability);
}

TEST_CASE("enumeration cap and mode selection") {
  const ProbVector q({0.9, 0.1});
  TypicalOptions o = forced(TypicalMode::exhaustive);
  o.enumeration_cap = 1000;
  CHECK_THROWS_AS(typical_set(q, 10, 0.2, o), CapExceededError);
  o.mode = TypicalMode::automatic;
  CHECK(typical_set(q, 10, 0.2, o).mode == TypicalMode::type_class);
  CHECK(typical_set(q, 9, 0.2, o).mode == TypicalMode::exhaustive);
  CHECK(typical_set(q, 200, 0.2).mode == TypicalMode::type_class);
  CHECK_THROWS_AS(typical_set(ProbVector({1.0, 0.0}), 3, 0.2), PreconditionError);
  CHECK_THROWS_AS(typical_set(q, 3, 0.0), PreconditionError);
  // Zero entries are stripped before the typical set is built.
  CHECK(typical_set(ProbVector({0.9, 0.1, 0.0}), 6, 0.2).probability == typical_set(q, 6, 0.2).probability);
}

TEST_CASE("parallel and serial enumeration give identical tallies") {
  const int saved = omp_get_max_threads();
  omp_set_num_threads(3);
  TypicalOptions s = forced(TypicalMode::exhaustive), p = s;
  s.execution = kernels::Execution::serial;
  p.execution = kernels::Execution::parallel;
  const ProbVector q({0.5, 0.3, 0.2});
  const auto a = typical_set(q, 9, 0.15, s), b = typical_set(q, 9, 0.15, p);
  CHECK(a.probability == b.probability);
  CHECK(a.size == b.size);
  omp_set_num_threads(saved);
}

TEST_CASE("interpolating state") {
  SUBCASE("uniform spectrum reproduces the tensor power") {
    const auto bell = maximally_entangled(2);
    const auto phi = interpolating_state(bell, typical_set(ProbVector::uniform(2), 4, 0.1));
    CHECK(trace_distance(phi, tensor_power(bell, 4)) < 1e-12);
  }
  SUBCASE("overlap equals the typical mass") {
    const auto psi = canonical_state(ProbVector({0.9, 0.1}));
    const auto typ = typical_set(ProbVector({0.9, 0.1}), 6, 0.25);
    const auto phi = interpolating_state(psi, typ);
    const auto power = tensor_power(psi, 6);
    CHECK(std::abs(overlap_sq(power, phi) - typ.total_probability()) < 1e-12);
    CHECK(std::abs(trace_distance(power, phi) - 2 * std::sqrt(1 - typ.total_probability())) < 1e-10);
    CHECK(std::abs(norm(phi.amplitudes()) - 1) < 1e-12);
  }
  SUBCASE("generic local bases agree with the trace norm") {
    const auto psi = random_pure(2, 3, 5);
    const auto q = schmidt(psi).spectrum().trimmed();
    for (std::size_t n : {2u, 3u}) {
      const auto typ = typical_set(q, n, 0.3);
      if (typ.size == 0) continue;
      const auto phi = interpolating_state(psi, typ);
      const auto power = tensor_power(psi, n);
      const double direct = trace_norm_hermitian(power.projector().matrix() - phi.projector().matrix());
      CHECK(std::abs(direct - 2 * std::sqrt(1 - typ.total_probability())) < 1e-10);
      CHECK(std::abs(overlap_sq(power, phi) - typ.total_probability()) < 1e-12);
      const auto spec = schmidt(phi).spectrum().trimmed(1e-14);
      const auto expect = interpolating_spectrum(typ);
      REQUIRE(spec.size() == expect.size());
      for (std::size_t i = 0; i < spec.size(); ++i) CHECK(std::abs(spec[i] - expect[i]) < 1e-12);
    }
  }
  SUBCASE("errors and mutation") {
    const auto psi = canonical_state(ProbVector({0.9, 0.1}));
    CHECK_THROWS_AS(interpolating_state(psi, typical_set(ProbVector({0.8, 0.2}), 4, 0.2)), SpectrumMismatchError);
    CHECK_THROWS_AS(interpolating_state(psi, typical_set(ProbVector({0.9, 0.1}), 14, 0.01)), CapExceededError);
    auto empty = typical_set(ProbVector({0.9, 0.1}), 3, 0.01);
    REQUIRE(empty.size == 0);
    CHECK_THROWS_AS(interpolating_state(psi, empty), PreconditionError);
    InterpolationOptions broken;
    broken.drop_normalization = true;
    CHECK_THROWS_AS(interpolating_state(psi, typical_set(ProbVector({0.9, 0.1}), 6, 0.25), broken), InvariantError);
  }
}

TEST_CASE("dilution dimensions") {
  const auto dims = dilution_dims(0.95, 1.0, 10, 0.25);
  CHECK(dims.distill == 171);
  CHECK(dims.distill == static_cast<std::uint64_t>(std::floor(0.95 * std::pow(2.0, 7.5))));
  CHECK(dims.cost == static_cast<std::uint64_t>(std::ceil(0.95 * std::pow(2.0, 12.5))));
  CHECK(std::abs(dims.log2_distill_rate(10) - 1.0) < 0.25 + 0.2);

  Rng rng(21);
  int checked = 0;
  while (checked < 100) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const double s = 0.2 + 2.0 * unit(rng);
    const double eps = std::min(s / 2, 0.5) * (0.05 + 0.9 * unit(rng));
    const std::size_t n = std::uniform_int_distribution<std::size_t>(1, 40)(rng);
    const double p = 1 - eps * unit(rng);
    if (n * (s + eps) > 62 || std::floor(p * std::exp2(n * (s - eps))) < 1) continue;
    const auto d = dilution_dims(p, s, n, eps);
    CHECK(std::abs(d.log2_distill_rate(n) - s) < eps + 2.0 / n);
    CHECK(std::abs(d.log2_cost_rate(n) - s) < eps + 1.0 / n);
    ++checked;
  }
  CHECK_THROWS_AS(dilution_dims(0.5, 1.0, 1, 0.4), PreconditionError);
  CHECK_THROWS_AS(dilution_dims(0.9, 1.0, 10, 0.5), PreconditionError);
  CHECK_THROWS_AS(dilution_dims(0.9, 0.4, 10, 0.25), PreconditionError);
}

TEST_CASE("uniform spectrum dimensions approach d^n as epsilon shrinks") {
  for (std::size_t n = 1; n <= 6; ++n) {
    const auto d = dilution_dims(1.0, 1.0, n, 1e-9);
    CHECK(d.distill == (std::uint64_t{1} << n) - 1);
    CHECK(d.cost == (std::uint64_t{1} << n) + 1);
  }
}

TEST_CASE("concentration and dilution protocols") {
  const auto psi = canonical_state(ProbVector({0.8, 0.2}));
  const auto typ = typical_set(ProbVector({0.8, 0.2}), 4, 0.3);
  const auto phi = interpolating_state(psi, typ);
  const auto dims = dilution_dims(typ.total_probability(), typ.entropy, 4, 0.3);

  const auto conc = concentrate_protocol(psi, 4, 0.3);
  for (const auto& s : conc.steps) {
    CHECK(step_completeness_defect(s) <= 1e-9);
    CHECK_NOTHROW(flatten(step_as_one_way(s)));
  }
  const auto out = apply_protocol(conc, phi);
  CHECK(trace_distance(out, protocol_target(conc, phi).projector()) <= 1e-8);
  const auto uni = conc.target.values();
  for (std::size_t i = 0; i < uni.size(); ++i)
    CHECK(std::abs(uni[i] - (i < dims.distill ? 1.0 / dims.distill : 0.0)) < 1e-15);

  const auto dil = dilute_protocol(psi, 4, 0.3);
  const auto source = maximally_entangled(dims.cost);
  const auto reached = protocol_target(dil, source);
  CHECK(trace_distance(apply_protocol(dil, source), reached.projector()) <= 1e-8);
  const auto spec = schmidt(reached).spectrum();
  const auto expect = interpolating_spectrum(typ).padded(spec.size());
  for (std::size_t i = 0; i < spec.size(); ++i) CHECK(std::abs(spec[i] - expect[i]) <= 1e-8);

  CHECK_THROWS_AS(dilute_protocol(canonical_state(ProbVector({0.6, 0.4})), 9, 0.2), CapExceededError);
}

TEST_CASE("regularization") {
  const auto t = regularize([](std::size_t n) { return n + 1.0; }, 50, true);
  CHECK(t.is_subadditive_certified);
  CHECK(t.values[0].per_copy == 2.0);
  CHECK(t.values[1].per_copy == 1.5);
  for (std::size_t i = 1; i < t.values.size(); ++i) CHECK(t.values[i].running_infimum <= t.values[i - 1].running_infimum);
  CHECK(std::abs(t.limit_estimate - 1.0) <= 1.0 / 50 + 1e-15);

  const double s = -0.7 * std::log2(0.7) - 0.3 * std::log2(0.3);
  const auto psi = canonical_state(ProbVector({0.7, 0.3}));
  const auto additive = regularize([&](std::size_t n) { return reduced_entropy(tensor_power(psi, n)); }, 5, true, 1e-10);
  CHECK(additive.is_subadditive_certified);
  for (const auto& v : additive.values) CHECK(std::abs(v.per_copy - s) < 1e-10);

  CHECK_FALSE(regularize([](std::size_t n) { return double(n * n); }, 4, true).is_subadditive_certified);
  CHECK(regularize([](std::size_t n) { return double(n * n); }, 4, false).limit_estimate == 4.0);
  CHECK_THROWS_AS(regularize([](std::size_t) -> double { throw InvariantError("provider"); }, 3, false), InvariantError);
  CHECK_THROWS_AS(regularize([](std::size_t) { return 0.0; }, 0, false), PreconditionError);
}

TEST_CASE("regularized relative entropy of entanglement on two copies") {
  const auto rho = random_density(2, 2, 2, 41);
  OptimizerBudget b;
  b.restarts = 2;
  b.iterations = 40;
  const auto one = relative_entropy_entanglement(rho, b);
  OptimizerBudget b2 = b;
  b2.restarts = 1;
  b2.iterations = 10;
  const std::vector<SeparableWitness> warm{tensor(one.witness, one.witness)};
  const auto t = regularize(
      [&](std::size_t n) {
        return n == 1 ? one.report.value
                      : relative_entropy_entanglement(bipartite_tensor(rho, rho), b2, warm).report.value;
      },
      2, false);
  CHECK(t.values[1].per_copy <= t.values[0].per_copy + 2 * tol::opt_er);
}

TEST_CASE("binomial averaging") {
  for (double x1 : {0.0, 0.25, 0.5, 0.9, 1.0}) {
    const auto c = binomial_average_check([](std::size_t) { return 1.7; }, 1.7, x1, 60);
    for (double v : c.values) CHECK(std::abs(v - x1 * 1.7) < 1e-12);
    const auto h = binomial_average_check([](std::size_t k) { return 1.7 + 1.0 / k; }, 1.7, x1, 60);
    for (std::size_t n = 1; n <= 60; ++n) {
      CHECK(std::abs(h.values[n - 1] - x1 * 1.7) <= 1.0 / n + 1e-12);
      // Closed form: x1 L + (1 - (1 - x1)^n) / n.
      CHECK(std::abs(h.values[n - 1] - (x1 * 1.7 + (1 - std::pow(1 - x1, n)) / n)) < 1e-12);
    }
  }
  const auto one = binomial_average_check([](std::size_t k) { return 2.0 + 1.0 / k; }, 2.0, 1.0, 10);
  for (std::size_t n = 1; n <= 10; ++n) CHECK(one.values[n - 1] == doctest::Approx(2.0 + 1.0 / n).epsilon(1e-15));
  CHECK_THROWS_AS(binomial_average_check([](std::size_t) { return 0.0; }, 0.0, 1.5, 3), PreconditionError);
}

TEST_CASE("uniqueness experiment") {
  const auto bell = maximally_entangled(2);
  for (auto m : {PureMeasure::svn, PureMeasure::s0, PureMeasure::sinf, PureMeasure::ef_pure}) {
    const auto r = uniqueness_experiment(bell, m, 8, [](std::size_t) { return 0.2; });
    for (const auto& row : r.rows) {
      CHECK(row.value_per_n == 1.0);
      CHECK(row.p == 1.0);
    }
  }
  const auto psi = canonical_state(ProbVector({0.7, 0.3}));
  const auto svn = uniqueness_experiment(psi, PureMeasure::svn, 8, [](std::size_t) { return 0.2; });
  const auto s0 = uniqueness_experiment(psi, PureMeasure::s0, 8, [](std::size_t) { return 0.2; });
  for (std::size_t i = 0; i < svn.rows.size(); ++i) {
    CHECK(std::abs(svn.rows[i].value_per_n - 0.8812908992306927) < 1e-12);
    CHECK(s0.rows[i].value_per_n == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(s0.rows[i].gap_to_svn > 0.1);
  }
  for (const auto& row : svn.rows) {
    if (row.n < 4) continue;
    REQUIRE(row.log2a_over_n.has_value());
    CHECK(*row.log2a_over_n <= row.value_per_n);
    CHECK(*row.log2b_over_n >= row.value_per_n - 1.0 / row.n);
  }
  CHECK_THROWS_AS(uniqueness_experiment(random_pure(3, 3, 1), PureMeasure::svn, 13, [](std::size_t) { return 0.1; }),
                  CapExceededError);
}

TEST_CASE("distillation and cost rates bracket the entropy") {
  // The proof's bounds need p > 1/2, which it gets from p >= 1 - eps. Rows
  // below that mass are skipped; at desk scale they appear up to n = 10.
  int rows = 0;
  for (std::uint64_t seed = 0; seed < 8; ++seed) {
    const auto psi = random_pure(2 + seed % 2, 2 + (seed / 2) % 2, seed);
    const double s = reduced_entropy(psi);
    const double eps = 0.45 * std::min(s / 2, 0.5);
    const auto r = uniqueness_experiment(psi, PureMeasure::svn, 10, [&](std::size_t) { return eps; });
    for (const auto& row : r.rows) {
      if (row.p <= 0.5 || !row.log2a_over_n) continue;
      CHECK(std::abs(*row.log2a_over_n - s) < eps + 2.0 / row.n);
      CHECK(std::abs(*row.log2b_over_n - s) < eps + 1.0 / row.n);
      ++rows;
    }
  }
  CHECK(rows >= 10);
}

TEST_CASE("Renyi counterexample pair") {
  double prev = 3.0;
  for (std::size_t n : {1u, 2u, 3u, 4u, 5u}) {
    const auto c = renyi_counterexample(n);
    CHECK(c.sinf_near == doctest::Approx(double(n)).epsilon(1e-12));
    CHECK(c.sinf_uniform == doctest::Approx(2.0 * n).epsilon(1e-12));
    const double expected_overlap = std::pow(2.0, -1.5 * n) + 1 - std::pow(2.0, -double(n));
    CHECK(std::abs(c.overlap - expected_overlap) < 1e-12);
    CHECK(std::abs(c.trace_distance - 2 * std::sqrt(1 - c.overlap * c.overlap)) < 1e-10);
    CHECK(c.trace_distance < prev);
    prev = c.trace_distance;
  }
  const auto c = renyi_counterexample(2);
  const auto x = canonical_state(c.near.padded(16)), y = canonical_state(c.uniform);
  CHECK(std::abs(trace_distance(x, y) - c.trace_distance) < 1e-12);
  CHECK(std::abs(trace_norm_hermitian(x.projector().matrix() - y.projector().matrix()) - c.trace_distance) < 1e-10);
}
