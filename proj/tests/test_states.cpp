#include <doctest.h>

#include <algorithm>
#include <functional>

#include "entkit/error.hpp"
#include "entkit/rng.hpp"
#include "entkit/states.hpp"
#include "support.hpp"

using namespace entkit;
using entkit::test::max_abs_diff;

TEST_CASE("density operator invariants") {
  CHECK_NOTHROW(DensityOperator::maximally_mixed(2, 3));
  CHECK_THROWS_AS(DensityOperator(ComplexMatrix::identity(4), 2, 2), InvariantError);     // trace 4
  CHECK_THROWS_AS(DensityOperator(ComplexMatrix::identity(3), 2, 2), DimensionError);
  const std::vector<double> neg{1.1, -0.1};
  CHECK_THROWS_AS(DensityOperator(ComplexMatrix::diagonal(neg), 2, 1), InvariantError);
  CHECK_THROWS_AS(DensityOperator(ComplexMatrix(2, 2, {0.5, 0.3, 0.0, 0.5}), 2, 1), InvariantError);
}

TEST_CASE("pure state invariants") {
  CHECK_THROWS_AS(PureBipartiteState(ComplexVector{1, 1}, 2, 1), InvariantError);
  CHECK_THROWS_AS(PureBipartiteState(ComplexVector{1}, 2, 1), DimensionError);
}

TEST_CASE("schmidt decomposition") {
  const auto bell = maximally_entangled(2);
  auto sd = schmidt(bell);
  CHECK(sd.coefficients[0] == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(sd.coefficients[1] == doctest::Approx(0.5).epsilon(1e-14));

  const ComplexVector e0{1, 0}, e1{0, 1};
  sd = schmidt(product_state(e0, e1));
  CHECK(sd.rank() == 1);
  CHECK(sd.coefficients[0] == 1.0);

  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const std::size_t da = 1 + seed % 4, db = 1 + (seed / 4) % 5;
    const auto psi = random_pure(da, db, seed);
    const auto s = schmidt(psi);
    const auto reduced = psi.projector().reduced(Side::A);
    auto ev = hermitian_eigenvalues(reduced);
    for (std::size_t k = 0; k < s.coefficients.size(); ++k) CHECK(std::abs(s.coefficients[k] - ev[k]) < 1e-10);

    const auto rebuilt = state_from_schmidt(s.coefficients, s.basis_a, s.basis_b);
    double err = 0.0;
    for (std::size_t i = 0; i < rebuilt.amplitudes().size(); ++i)
      err = std::max(err, std::abs(rebuilt.amplitudes()[i] - psi.amplitudes()[i]));
    CHECK(err < 1e-10);
    CHECK(is_unitary(s.basis_a, 1e-10));
    CHECK(is_unitary(s.basis_b, 1e-10));
  }
}

TEST_CASE("schmidt coefficients are invariant under local unitaries") {
  Rng rng(99);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto psi = random_pure(3, 4, seed);
    const auto moved = apply_local_unitaries(psi, random_unitary(3, rng), random_unitary(4, rng));
    const auto a = schmidt(psi).coefficients, b = schmidt(moved).coefficients;
    for (std::size_t k = 0; k < a.size(); ++k) CHECK(std::abs(a[k] - b[k]) < 1e-10);
  }
}

TEST_CASE("reduced states share their nonzero spectrum") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto psi = random_pure(2, 5, seed);
    auto ea = hermitian_eigenvalues(psi.projector().reduced(Side::A));
    auto eb = hermitian_eigenvalues(psi.projector().reduced(Side::B));
    for (std::size_t k = 0; k < ea.size(); ++k) CHECK(std::abs(ea[k] - eb[k]) < 1e-10);
    for (std::size_t k = ea.size(); k < eb.size(); ++k) CHECK(std::abs(eb[k]) < 1e-10);
  }
}

TEST_CASE("maximally entangled states") {
  CHECK_THROWS_AS(maximally_entangled(0), PreconditionError);
  CHECK(schmidt(maximally_entangled(1)).coefficients == std::vector<double>{1.0});
  for (std::size_t d = 1; d <= 8; ++d) {
    const auto phi = maximally_entangled(d);
    const auto red = phi.projector().reduced(Side::A);
    CHECK(max_abs_diff(red, ComplexMatrix::identity(d) * Complex(1.0 / d)) < 1e-12);
    for (double p : schmidt(phi).coefficients) CHECK(std::abs(p - 1.0 / d) < 1e-12);
  }
}

TEST_CASE("random pure sampling") {
  const auto a = random_pure(3, 3, 42), b = random_pure(3, 3, 42);
  CHECK(a.amplitudes() == b.amplitudes());
  CHECK(std::abs(norm(a.amplitudes()) - 1.0) < 1e-12);

  // The Haar average of the reduced purity at dA = dB = 2 is (dA+dB)/(dA dB + 1).
  double mean = 0.0;
  for (std::uint64_t s = 0; s < 1000; ++s) {
    const auto red = random_pure(2, 2, derive_seed(5, s)).projector().reduced(Side::A);
    double purity = 0.0;
    for (auto x : red.data()) purity += std::norm(x);
    mean += purity / 1000.0;
  }
  CHECK(std::abs(mean - 0.8) < 0.02);
}

TEST_CASE("random density operators") {
  CHECK_THROWS_AS(random_density(2, 2, 0, 1), PreconditionError);
  CHECK_THROWS_AS(random_density(2, 2, 5, 1), PreconditionError);
  const auto pure = random_density(2, 3, 1, 4);
  CHECK(std::abs(pure.purity() - 1.0) < 1e-10);
  const auto full = random_density(2, 2, 4, 8);
  const auto ev = hermitian_eigenvalues(full.matrix());
  CHECK(ev.size() == 4);
  CHECK(ev.back() > 1e-6);
  CHECK(std::abs(full.matrix().trace().real() - 1.0) < 1e-12);
  CHECK(ev.back() >= -1e-12);
}

TEST_CASE("separable mixtures") {
  const std::vector<double> zero{1, 0}, one{0, 1};
  const auto p0 = ComplexMatrix::diagonal(zero), p1 = ComplexMatrix::diagonal(one);
  const std::vector<ProductTerm> single{{1.0, p0, p1}};
  const auto rho = separable_mixture(single);
  CHECK(rho.separable_by_construction());
  CHECK(rho.matrix() == tensor(p0, p1));

  const std::vector<ProductTerm> mix{{0.5, p0, p0}, {0.5, p1, p1}};
  const std::vector<double> diag{0.5, 0, 0, 0.5};
  CHECK(separable_mixture(mix).matrix() == ComplexMatrix::diagonal(diag));

  const std::vector<ProductTerm> bad{{0.7, p0, p0}, {0.7, p1, p1}};
  CHECK_THROWS_AS(separable_mixture(bad), PreconditionError);
  const std::vector<ProductTerm> negative{{1.5, p0, p0}, {-0.5, p1, p1}};
  CHECK_THROWS_AS(separable_mixture(negative), PreconditionError);

  CHECK(random_separable(2, 3, 4, 1).separable_by_construction());
  CHECK_FALSE(random_density(2, 2, 2, 1).separable_by_construction());
}

TEST_CASE("bipartite tensor regroups factors") {
  const auto psi = random_pure(2, 3, 1), phi = random_pure(2, 2, 2);
  const auto joint = bipartite_tensor(psi, phi);
  CHECK(joint.dim_a() == 4);
  CHECK(joint.dim_b() == 6);
  // Schmidt spectrum of a product is the product of spectra.
  const auto sp = schmidt(psi).coefficients, sq = schmidt(phi).coefficients;
  std::vector<double> expected;
  for (double x : sp)
    for (double y : sq) expected.push_back(x * y);
  std::sort(expected.begin(), expected.end(), std::greater<>());
  const auto got = schmidt(joint).coefficients;
  for (std::size_t k = 0; k < expected.size(); ++k) CHECK(std::abs(got[k] - expected[k]) < 1e-12);

  const auto mixed = bipartite_tensor(psi.projector(), phi.projector());
  CHECK(max_abs_diff(mixed.matrix(), joint.projector().matrix()) < 1e-14);

  const auto bell2 = tensor_power(maximally_entangled(2), 2);
  for (double p : schmidt(bell2).coefficients) CHECK(std::abs(p - 0.25) < 1e-14);
}

TEST_CASE("trace distance") {
  const ComplexVector e0{1, 0}, e1{0, 1};
  const auto a = product_state(e0, e0), b = product_state(e1, e0);
  CHECK(trace_distance(a, b) == doctest::Approx(2.0));
  CHECK(trace_distance(a, a) == 0.0);
  for (std::uint64_t s = 0; s < 10; ++s) {
    const auto x = random_pure(2, 2, s), y = random_pure(2, 2, s + 100);
    CHECK(std::abs(trace_distance(x, y) - trace_distance(x.projector(), y.projector())) < 1e-10);
  }
}
