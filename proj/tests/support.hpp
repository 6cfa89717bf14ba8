#pragma once

// Independent reference computations used as oracles by the unit tests.

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

#include "entkit/linalg.hpp"

namespace entkit::test {

inline double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a.data()[i] - b.data()[i]));
  return m;
}

/// Partial trace by explicit index summation, written without reusing the
/// library's loop structure.
inline ComplexMatrix naive_partial_trace(const ComplexMatrix& m, std::size_t da, std::size_t db, bool keep_a) {
  const std::size_t d = keep_a ? da : db;
  ComplexMatrix out(d, d);
  for (std::size_t r = 0; r < m.rows(); ++r)
    for (std::size_t c = 0; c < m.cols(); ++c) {
      const std::size_t ra = r / db, rb = r % db, ca = c / db, cb = c % db;
      if (keep_a && rb == cb) out(ra, ca) += m(r, c);
      if (!keep_a && ra == ca) out(rb, cb) += m(r, c);
    }
  return out;
}

/// Naive triple-loop product.
inline ComplexMatrix naive_product(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < b.cols(); ++j) {
      Complex s{};
      for (std::size_t k = 0; k < a.cols(); ++k) s += a(i, k) * b(k, j);
      out(i, j) = s;
    }
  return out;
}

/// Real roots of a monic cubic x^3 + b x^2 + c x + d with three real roots
/// (trigonometric form), descending.
inline std::vector<double> cubic_real_roots(double b, double c, double d) {
  const double p = c - b * b / 3.0;
  const double q = 2.0 * b * b * b / 27.0 - b * c / 3.0 + d;
  const double r = std::sqrt(-p / 3.0);
  const double arg = std::clamp(3.0 * q / (2.0 * p) * std::sqrt(-3.0 / p), -1.0, 1.0);
  const double phi = std::acos(arg) / 3.0;
  std::vector<double> roots;
  for (int k = 0; k < 3; ++k) roots.push_back(2.0 * r * std::cos(phi - 2.0 * M_PI * k / 3.0) - b / 3.0);
  std::sort(roots.begin(), roots.end(), std::greater<>());
  return roots;
}

/// Shannon entropy in bits by direct summation.
inline double entropy_bits(const std::vector<double>& p) {
  double s = 0.0;
  for (double x : p)
    if (x > 0.0) s -= x * std::log2(x);
  return s;
}

}  // namespace entkit::test
