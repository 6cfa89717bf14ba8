#include "entkit/rng.hpp"

#include <cmath>

namespace entkit {

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

ComplexVector gaussian_vector(std::size_t n, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  ComplexVector v(n);
  for (auto& x : v) {
    const double re = normal(rng);
    const double im = normal(rng);
    x = Complex(re, im);
  }
  return v;
}

ComplexVector random_unit_vector(std::size_t n, Rng& rng) {
  for (;;) {
    auto v = gaussian_vector(n, rng);
    const double nv = norm(v);
    if (nv < 1e-300) continue;
    for (auto& x : v) x /= nv;
    return v;
  }
}

ComplexMatrix random_unitary(std::size_t n, Rng& rng) {
  // Gram-Schmidt on Gaussian columns is QR with a positive diagonal R,
  // which is exactly the phase fix that makes the result Haar distributed.
  ComplexMatrix q(n, n);
  for (std::size_t c = 0; c < n; ++c) {
    for (;;) {
      auto v = gaussian_vector(n, rng);
      for (int pass = 0; pass < 2; ++pass) {
        for (std::size_t k = 0; k < c; ++k) {
          const auto qk = q.col(k);
          const Complex proj = inner(qk, v);
          for (std::size_t i = 0; i < n; ++i) v[i] -= proj * qk[i];
        }
      }
      const double nv = norm(v);
      if (nv < 1e-8) continue;
      for (auto& x : v) x /= nv;
      q.set_col(c, v);
      break;
    }
  }
  return q;
}

ComplexMatrix random_hermitian(std::size_t n, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  ComplexMatrix h(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    h(i, i) = normal(rng);
    for (std::size_t j = i + 1; j < n; ++j) {
      const double re = normal(rng);
      const double im = normal(rng);
      h(i, j) = Complex(re, im) / std::sqrt(2.0);
      h(j, i) = std::conj(h(i, j));
    }
  }
  return h;
}

std::vector<double> random_simplex_point(std::size_t n, Rng& rng) {
  std::exponential_distribution<double> expo(1.0);
  std::vector<double> x(n);
  double total = 0.0;
  for (auto& v : x) {
    v = expo(rng);
    total += v;
  }
  for (auto& v : x) v /= total;
  return x;
}

}  // namespace entkit
