#pragma once

// Dense complex linear algebra on small matrices.
//
// Storage is row-major. Composite (bipartite) indices always follow
// i = i_A * d_B + i_B.

#include <complex>
#include <cstddef>
#include <span>
#include <utility>
#include <vector>

namespace entkit {

using Complex = std::complex<double>;
using ComplexVector = std::vector<Complex>;

class ComplexMatrix {
 public:
  ComplexMatrix() = default;
  ComplexMatrix(std::size_t rows, std::size_t cols);
  /// Throws DimensionError on a size mismatch and InvariantError on a
  /// non-finite entry.
  ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<Complex> entries);

  static ComplexMatrix identity(std::size_t n);
  static ComplexMatrix diagonal(std::span<const double> values);
  static ComplexMatrix diagonal(std::span<const Complex> values);
  /// |u><v|
  static ComplexMatrix outer(std::span<const Complex> u, std::span<const Complex> v);
  static ComplexMatrix column(std::span<const Complex> v);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t size() const noexcept { return data_.size(); }
  bool is_square() const noexcept { return rows_ == cols_; }
  bool empty() const noexcept { return data_.empty(); }

  Complex& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const Complex& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<Complex> data() noexcept { return data_; }
  std::span<const Complex> data() const noexcept { return data_; }

  ComplexVector col(std::size_t c) const;
  void set_col(std::size_t c, std::span<const Complex> v);

  ComplexMatrix adjoint() const;
  ComplexMatrix transpose() const;
  ComplexMatrix conj() const;
  Complex trace() const;

  ComplexMatrix& operator+=(const ComplexMatrix& o);
  ComplexMatrix& operator-=(const ComplexMatrix& o);
  ComplexMatrix& operator*=(Complex s);

  friend ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) { return a += b; }
  friend ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) { return a -= b; }
  friend ComplexMatrix operator*(ComplexMatrix a, Complex s) { return a *= s; }
  friend ComplexMatrix operator*(Complex s, ComplexMatrix a) { return a *= s; }
  friend ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b);
  friend ComplexVector operator*(const ComplexMatrix& a, std::span<const Complex> v);

  bool operator==(const ComplexMatrix& o) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Complex> data_;
};

ComplexVector operator*(const ComplexMatrix& a, const ComplexVector& v);

double frobenius_norm(const ComplexMatrix& a);
double norm(std::span<const Complex> v);
/// <u|v>, conjugate-linear in the first argument.
Complex inner(std::span<const Complex> u, std::span<const Complex> v);
/// u (x) v for vectors with the same composite index convention as tensor().
ComplexVector tensor(std::span<const Complex> u, std::span<const Complex> v);

/// Kronecker product.
ComplexMatrix tensor(const ComplexMatrix& a, const ComplexMatrix& b);

enum class Side { A, B };

/// Reduced operator on the kept factor. Throws DimensionError when m is not
/// (dA*dB)-square.
ComplexMatrix partial_trace(const ComplexMatrix& m, std::size_t dim_a, std::size_t dim_b, Side keep);

/// (A + A^dagger) / 2.
ComplexMatrix hermitian_part(const ComplexMatrix& a);
bool is_hermitian(const ComplexMatrix& a, double tol);
bool is_unitary(const ComplexMatrix& u, double tol);

struct HermitianEigenSystem {
  std::vector<double> eigenvalues;  // descending
  ComplexMatrix eigenvectors;       // column k belongs to eigenvalues[k]
};

/// Cyclic complex Jacobi. Throws InvariantError when a is not Hermitian
/// within tol::herm.
HermitianEigenSystem hermitian_eig(const ComplexMatrix& a);
/// Eigenvalues only, same algorithm.
std::vector<double> hermitian_eigenvalues(const ComplexMatrix& a);

struct SvdResult {
  ComplexMatrix u;                     // rows x rows, unitary
  std::vector<double> singular_values; // min(rows, cols), descending
  ComplexMatrix v;                     // cols x cols, unitary
};

/// One-sided Jacobi SVD with full unitary factors: a = U diag(s) V^dagger.
SvdResult svd(const ComplexMatrix& a);

double trace_norm(const ComplexMatrix& a);
/// Sum of |eigenvalues|; a must be Hermitian.
double trace_norm_hermitian(const ComplexMatrix& a);

/// Positive semidefiniteness test via Cholesky of a + shift*I.
bool is_positive_semidefinite(const ComplexMatrix& a, double shift);

/// Apply f to the eigenvalues of a Hermitian matrix.
template <class F>
ComplexMatrix hermitian_function(const ComplexMatrix& a, F&& f) {
  auto es = hermitian_eig(a);
  const std::size_t n = a.rows();
  ComplexMatrix out(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    const double fk = f(es.eigenvalues[k]);
    if (fk == 0.0) continue;
    for (std::size_t i = 0; i < n; ++i) {
      const Complex vik = es.eigenvectors(i, k) * fk;
      for (std::size_t j = 0; j < n; ++j) out(i, j) += vik * std::conj(es.eigenvectors(j, k));
    }
  }
  return out;
}

/// Extends the given orthonormal columns to a full n x n unitary by
/// Gram-Schmidt over the standard basis.
ComplexMatrix complete_orthonormal_basis(const ComplexMatrix& columns);

}  // namespace entkit
