#include "entkit/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "entkit/error.hpp"
#include "entkit/kernels.hpp"
#include "entkit/tolerances.hpp"

namespace entkit {

namespace {

void require_same_shape(const ComplexMatrix& a, const ComplexMatrix& b, const char* what) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw DimensionError(std::string(what) + ": shape mismatch " + std::to_string(a.rows()) + "x" +
                         std::to_string(a.cols()) + " vs " + std::to_string(b.rows()) + "x" +
                         std::to_string(b.cols()));
  }
}

// Rotation that annihilates the off-diagonal entry of the Hermitian 2x2
// block [[app, apq], [conj(apq), aqq]]. Applied on the right as
//   J = [[c, s], [-s conj(e), c conj(e)]].
struct JacobiRotation {
  double c;
  double s;
  Complex e;
};

JacobiRotation jacobi_rotation(double app, double aqq, Complex apq) {
  const double mag = std::abs(apq);
  const Complex e = apq / mag;
  const double theta = (aqq - app) / (2.0 * mag);
  const double t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
  const double c = 1.0 / std::sqrt(t * t + 1.0);
  return {c, t * c, e};
}

void rotate_columns(ComplexMatrix& m, std::size_t p, std::size_t q, const JacobiRotation& r) {
  const Complex ce = std::conj(r.e);
  for (std::size_t k = 0; k < m.rows(); ++k) {
    const Complex mkp = m(k, p);
    const Complex mkq = m(k, q);
    m(k, p) = r.c * mkp - r.s * ce * mkq;
    m(k, q) = r.s * mkp + r.c * ce * mkq;
  }
}

void rotate_rows(ComplexMatrix& m, std::size_t p, std::size_t q, const JacobiRotation& r) {
  for (std::size_t k = 0; k < m.cols(); ++k) {
    const Complex mpk = m(p, k);
    const Complex mqk = m(q, k);
    m(p, k) = r.c * mpk - r.s * r.e * mqk;
    m(q, k) = r.s * mpk + r.c * r.e * mqk;
  }
}

HermitianEigenSystem jacobi_eig(const ComplexMatrix& input, bool want_vectors) {
  if (!input.is_square()) throw DimensionError("hermitian_eig: matrix is not square");
  if (!is_hermitian(input, tol::herm)) throw InvariantError("hermitian_eig: matrix is not Hermitian");
  const std::size_t n = input.rows();
  ComplexMatrix a = input;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const Complex avg = 0.5 * (a(i, j) + std::conj(a(j, i)));
      a(i, j) = avg;
      a(j, i) = std::conj(avg);
    }
    a(i, i) = a(i, i).real();
  }
  ComplexMatrix v = want_vectors ? ComplexMatrix::identity(n) : ComplexMatrix();
  const double scale = frobenius_norm(a);

  for (int sweep = 0; sweep < 100 && scale > 0.0; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) off += std::norm(a(p, q));
    if (std::sqrt(off) <= 1e-17 * scale) break;

    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        if (std::abs(a(p, q)) <= 1e-300) continue;
        const auto r = jacobi_rotation(a(p, p).real(), a(q, q).real(), a(p, q));
        rotate_columns(a, p, q, r);
        rotate_rows(a, p, q, r);
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        a(p, p) = a(p, p).real();
        a(q, q) = a(q, q).real();
        if (want_vectors) rotate_columns(v, p, q, r);
      }
    }
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) { return a(x, x).real() > a(y, y).real(); });

  HermitianEigenSystem out;
  out.eigenvalues.resize(n);
  for (std::size_t k = 0; k < n; ++k) out.eigenvalues[k] = a(order[k], order[k]).real();
  if (want_vectors) {
    out.eigenvectors = ComplexMatrix(n, n);
    for (std::size_t k = 0; k < n; ++k)
      for (std::size_t i = 0; i < n; ++i) out.eigenvectors(i, k) = v(i, order[k]);
  }
  return out;
}

// a has at least as many rows as columns.
SvdResult svd_tall(const ComplexMatrix& a) {
  const std::size_t m = a.rows();
  const std::size_t n = a.cols();
  ComplexMatrix w = a;
  ComplexMatrix v = ComplexMatrix::identity(n);

  for (int sweep = 0; sweep < 100; ++sweep) {
    bool rotated = false;
    for (std::size_t i = 0; i + 1 < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        double alpha = 0.0;
        double beta = 0.0;
        Complex gamma = 0.0;
        for (std::size_t k = 0; k < m; ++k) {
          alpha += std::norm(w(k, i));
          beta += std::norm(w(k, j));
          gamma += std::conj(w(k, i)) * w(k, j);
        }
        if (std::abs(gamma) <= 1e-16 * std::sqrt(alpha * beta) || std::abs(gamma) <= 1e-300) continue;
        rotated = true;
        const auto r = jacobi_rotation(alpha, beta, gamma);
        rotate_columns(w, i, j, r);
        rotate_columns(v, i, j, r);
      }
    }
    if (!rotated) break;
  }

  std::vector<double> s(n);
  for (std::size_t k = 0; k < n; ++k) s[k] = norm(w.col(k));
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return s[x] > s[y]; });

  const double smax = n > 0 ? s[order[0]] : 0.0;
  SvdResult out;
  out.singular_values.resize(n);
  out.v = ComplexMatrix(n, n);
  std::size_t kept = 0;
  for (std::size_t k = 0; k < n; ++k) {
    out.singular_values[k] = s[order[k]];
    for (std::size_t i = 0; i < n; ++i) out.v(i, k) = v(i, order[k]);
    if (s[order[k]] > 1e-14 * smax && s[order[k]] > 1e-300) ++kept;
  }
  ComplexMatrix ucols(m, kept);
  for (std::size_t k = 0; k < kept; ++k) {
    const double sk = s[order[k]];
    for (std::size_t i = 0; i < m; ++i) ucols(i, k) = w(i, order[k]) / sk;
  }
  out.u = complete_orthonormal_basis(ucols);
  return out;
}

}  // namespace

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols, Complex(0.0, 0.0)) {}

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<Complex> entries)
    : rows_(rows), cols_(cols), data_(std::move(entries)) {
  if (data_.size() != rows * cols) {
    throw DimensionError("ComplexMatrix: expected " + std::to_string(rows * cols) + " entries, got " +
                         std::to_string(data_.size()));
  }
  for (const auto& z : data_) {
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
      throw InvariantError("ComplexMatrix: non-finite entry");
  }
}

ComplexMatrix ComplexMatrix::identity(std::size_t n) {
  ComplexMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

ComplexMatrix ComplexMatrix::diagonal(std::span<const double> values) {
  ComplexMatrix m(values.size(), values.size());
  for (std::size_t i = 0; i < values.size(); ++i) m(i, i) = values[i];
  return m;
}

ComplexMatrix ComplexMatrix::diagonal(std::span<const Complex> values) {
  ComplexMatrix m(values.size(), values.size());
  for (std::size_t i = 0; i < values.size(); ++i) m(i, i) = values[i];
  return m;
}

ComplexMatrix ComplexMatrix::outer(std::span<const Complex> u, std::span<const Complex> v) {
  ComplexMatrix m(u.size(), v.size());
  for (std::size_t i = 0; i < u.size(); ++i)
    for (std::size_t j = 0; j < v.size(); ++j) m(i, j) = u[i] * std::conj(v[j]);
  return m;
}

ComplexMatrix ComplexMatrix::column(std::span<const Complex> v) {
  return ComplexMatrix(v.size(), 1, std::vector<Complex>(v.begin(), v.end()));
}

ComplexVector ComplexMatrix::col(std::size_t c) const {
  ComplexVector out(rows_);
  for (std::size_t r = 0; r < rows_; ++r) out[r] = (*this)(r, c);
  return out;
}

void ComplexMatrix::set_col(std::size_t c, std::span<const Complex> v) {
  if (v.size() != rows_) throw DimensionError("set_col: length mismatch");
  for (std::size_t r = 0; r < rows_; ++r) (*this)(r, c) = v[r];
}

ComplexMatrix ComplexMatrix::adjoint() const {
  ComplexMatrix out(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) out(c, r) = std::conj((*this)(r, c));
  return out;
}

ComplexMatrix ComplexMatrix::transpose() const {
  ComplexMatrix out(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) out(c, r) = (*this)(r, c);
  return out;
}

ComplexMatrix ComplexMatrix::conj() const {
  ComplexMatrix out = *this;
  for (auto& z : out.data_) z = std::conj(z);
  return out;
}

Complex ComplexMatrix::trace() const {
  if (!is_square()) throw DimensionError("trace: matrix is not square");
  Complex t = 0.0;
  for (std::size_t i = 0; i < rows_; ++i) t += (*this)(i, i);
  return t;
}

ComplexMatrix& ComplexMatrix::operator+=(const ComplexMatrix& o) {
  require_same_shape(*this, o, "operator+");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator-=(const ComplexMatrix& o) {
  require_same_shape(*this, o, "operator-");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= o.data_[i];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator*=(Complex s) {
  for (auto& z : data_) z *= s;
  return *this;
}

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) { return kernels::matmul(a, b); }

ComplexVector operator*(const ComplexMatrix& a, std::span<const Complex> v) {
  if (a.cols() != v.size()) throw DimensionError("matrix-vector product: length mismatch");
  ComplexVector out(a.rows());
  for (std::size_t r = 0; r < a.rows(); ++r) {
    Complex acc = 0.0;
    for (std::size_t c = 0; c < a.cols(); ++c) acc += a(r, c) * v[c];
    out[r] = acc;
  }
  return out;
}

ComplexVector operator*(const ComplexMatrix& a, const ComplexVector& v) {
  return a * std::span<const Complex>(v);
}

double frobenius_norm(const ComplexMatrix& a) {
  double acc = 0.0;
  for (const auto& z : a.data()) acc += std::norm(z);
  return std::sqrt(acc);
}

double norm(std::span<const Complex> v) {
  double acc = 0.0;
  for (const auto& z : v) acc += std::norm(z);
  return std::sqrt(acc);
}

Complex inner(std::span<const Complex> u, std::span<const Complex> v) {
  if (u.size() != v.size()) throw DimensionError("inner: length mismatch");
  Complex acc = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) acc += std::conj(u[i]) * v[i];
  return acc;
}

ComplexVector tensor(std::span<const Complex> u, std::span<const Complex> v) {
  ComplexVector out(u.size() * v.size());
  for (std::size_t i = 0; i < u.size(); ++i)
    for (std::size_t j = 0; j < v.size(); ++j) out[i * v.size() + j] = u[i] * v[j];
  return out;
}

ComplexMatrix tensor(const ComplexMatrix& a, const ComplexMatrix& b) { return kernels::kron(a, b); }

ComplexMatrix partial_trace(const ComplexMatrix& m, std::size_t dim_a, std::size_t dim_b, Side keep) {
  const std::size_t n = dim_a * dim_b;
  if (!m.is_square() || m.rows() != n) {
    throw DimensionError("partial_trace: matrix is " + std::to_string(m.rows()) + "x" + std::to_string(m.cols()) +
                         ", expected " + std::to_string(n) + "x" + std::to_string(n));
  }
  if (keep == Side::A) {
    ComplexMatrix out(dim_a, dim_a);
    for (std::size_t i = 0; i < dim_a; ++i)
      for (std::size_t j = 0; j < dim_a; ++j) {
        Complex acc = 0.0;
        for (std::size_t k = 0; k < dim_b; ++k) acc += m(i * dim_b + k, j * dim_b + k);
        out(i, j) = acc;
      }
    return out;
  }
  ComplexMatrix out(dim_b, dim_b);
  for (std::size_t i = 0; i < dim_b; ++i)
    for (std::size_t j = 0; j < dim_b; ++j) {
      Complex acc = 0.0;
      for (std::size_t k = 0; k < dim_a; ++k) acc += m(k * dim_b + i, k * dim_b + j);
      out(i, j) = acc;
    }
  return out;
}

ComplexMatrix hermitian_part(const ComplexMatrix& a) {
  if (!a.is_square()) throw DimensionError("hermitian_part: matrix is not square");
  ComplexMatrix out(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) out(i, j) = 0.5 * (a(i, j) + std::conj(a(j, i)));
  return out;
}

bool is_hermitian(const ComplexMatrix& a, double tol) {
  if (!a.is_square()) return false;
  double acc = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) acc += std::norm(a(i, j) - std::conj(a(j, i)));
  return std::sqrt(acc) <= tol;
}

bool is_unitary(const ComplexMatrix& u, double tol) {
  if (!u.is_square()) return false;
  return frobenius_norm(u.adjoint() * u - ComplexMatrix::identity(u.rows())) <= tol;
}

HermitianEigenSystem hermitian_eig(const ComplexMatrix& a) { return jacobi_eig(a, true); }

std::vector<double> hermitian_eigenvalues(const ComplexMatrix& a) { return jacobi_eig(a, false).eigenvalues; }

SvdResult svd(const ComplexMatrix& a) {
  if (a.rows() >= a.cols()) return svd_tall(a);
  auto t = svd_tall(a.adjoint());
  return SvdResult{std::move(t.v), std::move(t.singular_values), std::move(t.u)};
}

double trace_norm(const ComplexMatrix& a) {
  const auto s = svd(a).singular_values;
  return std::accumulate(s.begin(), s.end(), 0.0);
}

double trace_norm_hermitian(const ComplexMatrix& a) {
  double acc = 0.0;
  for (double l : hermitian_eigenvalues(a)) acc += std::abs(l);
  return acc;
}

bool is_positive_semidefinite(const ComplexMatrix& a, double shift) {
  if (!is_hermitian(a, tol::herm)) return false;
  const std::size_t n = a.rows();
  ComplexMatrix l(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    double d = a(j, j).real() + shift;
    for (std::size_t k = 0; k < j; ++k) d -= std::norm(l(j, k));
    if (!(d > 0.0)) return false;
    const double ljj = std::sqrt(d);
    l(j, j) = ljj;
    for (std::size_t i = j + 1; i < n; ++i) {
      Complex acc = 0.5 * (a(i, j) + std::conj(a(j, i)));
      for (std::size_t k = 0; k < j; ++k) acc -= l(i, k) * std::conj(l(j, k));
      l(i, j) = acc / ljj;
    }
  }
  return true;
}

ComplexMatrix complete_orthonormal_basis(const ComplexMatrix& columns) {
  const std::size_t m = columns.rows();
  std::vector<ComplexVector> basis;
  basis.reserve(m);

  auto orthogonalize = [&](ComplexVector& x) {
    for (int pass = 0; pass < 2; ++pass) {
      for (const auto& b : basis) {
        const Complex proj = inner(b, x);
        for (std::size_t i = 0; i < m; ++i) x[i] -= proj * b[i];
      }
    }
  };
  auto try_add = [&](ComplexVector x, double min_norm) {
    orthogonalize(x);
    const double nx = norm(x);
    if (nx <= min_norm) return false;
    for (auto& z : x) z /= nx;
    basis.push_back(std::move(x));
    return true;
  };

  for (std::size_t c = 0; c < columns.cols() && basis.size() < m; ++c) try_add(columns.col(c), 1e-8);
  for (std::size_t e = 0; e < m && basis.size() < m; ++e) {
    ComplexVector x(m, Complex(0.0, 0.0));
    x[e] = 1.0;
    try_add(std::move(x), 1e-3);
  }
  ComplexMatrix out(m, m);
  for (std::size_t c = 0; c < m; ++c) out.set_col(c, basis[c]);
  return out;
}

}  // namespace entkit
