#include "entkit/kernels.hpp"

#include <exception>
#include <string>
#include <vector>

#include "entkit/error.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace entkit::kernels {

namespace {

constexpr std::size_t kParallelWork = 1u << 15;

void check_matmul(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.cols() != b.rows()) {
    throw DimensionError("matmul: inner dimensions " + std::to_string(a.cols()) + " and " +
                         std::to_string(b.rows()) + " differ");
  }
}

void check_local(const ComplexMatrix& rho, std::size_t dim_a, std::size_t dim_b, const ComplexMatrix& op_a,
                 const ComplexMatrix& op_b) {
  if (!rho.is_square() || rho.rows() != dim_a * dim_b)
    throw DimensionError("conjugate_local: state is not (dimA*dimB)-square");
  if (op_a.cols() != dim_a || op_b.cols() != dim_b)
    throw DimensionError("conjugate_local: operator input dimension mismatch");
}

// out = (A (x) B) m for an (dA*dB) x cols input.
template <bool Parallel>
ComplexMatrix left_local(const ComplexMatrix& m, std::size_t dim_a, std::size_t dim_b, const ComplexMatrix& op_a,
                         const ComplexMatrix& op_b) {
  const std::size_t out_a = op_a.rows();
  const std::size_t out_b = op_b.rows();
  const std::size_t cols = m.cols();
  ComplexMatrix t(out_a * dim_b, cols);
  const auto rows_t = static_cast<long long>(out_a * dim_b);
#pragma omp parallel for if (Parallel) schedule(static)
  for (long long row = 0; row < rows_t; ++row) {
    const std::size_t x = static_cast<std::size_t>(row) / dim_b;
    const std::size_t b = static_cast<std::size_t>(row) % dim_b;
    for (std::size_t c = 0; c < cols; ++c) {
      Complex acc = 0.0;
      for (std::size_t a = 0; a < dim_a; ++a) acc += op_a(x, a) * m(a * dim_b + b, c);
      t(static_cast<std::size_t>(row), c) = acc;
    }
  }
  ComplexMatrix out(out_a * out_b, cols);
  const auto rows_o = static_cast<long long>(out_a * out_b);
#pragma omp parallel for if (Parallel) schedule(static)
  for (long long row = 0; row < rows_o; ++row) {
    const std::size_t x = static_cast<std::size_t>(row) / out_b;
    const std::size_t y = static_cast<std::size_t>(row) % out_b;
    for (std::size_t c = 0; c < cols; ++c) {
      Complex acc = 0.0;
      for (std::size_t b = 0; b < dim_b; ++b) acc += op_b(y, b) * t(x * dim_b + b, c);
      out(static_cast<std::size_t>(row), c) = acc;
    }
  }
  return out;
}

template <bool Parallel>
ComplexMatrix matmul_impl(const ComplexMatrix& a, const ComplexMatrix& b) {
  check_matmul(a, b);
  const std::size_t n = a.rows();
  const std::size_t k = a.cols();
  const std::size_t m = b.cols();
  ComplexMatrix out(n, m);
  const auto rows = static_cast<long long>(n);
#pragma omp parallel for if (Parallel) schedule(static)
  for (long long ri = 0; ri < rows; ++ri) {
    const auto i = static_cast<std::size_t>(ri);
    for (std::size_t l = 0; l < k; ++l) {
      const Complex ail = a(i, l);
      if (ail == Complex(0.0, 0.0)) continue;
      for (std::size_t j = 0; j < m; ++j) out(i, j) += ail * b(l, j);
    }
  }
  return out;
}

template <bool Parallel>
ComplexMatrix kron_impl(const ComplexMatrix& a, const ComplexMatrix& b) {
  const std::size_t br = b.rows();
  const std::size_t bc = b.cols();
  ComplexMatrix out(a.rows() * br, a.cols() * bc);
  const auto rows = static_cast<long long>(a.rows() * br);
#pragma omp parallel for if (Parallel) schedule(static)
  for (long long r = 0; r < rows; ++r) {
    const std::size_t ia = static_cast<std::size_t>(r) / br;
    const std::size_t ib = static_cast<std::size_t>(r) % br;
    for (std::size_t ja = 0; ja < a.cols(); ++ja) {
      const Complex x = a(ia, ja);
      for (std::size_t jb = 0; jb < bc; ++jb) out(static_cast<std::size_t>(r), ja * bc + jb) = x * b(ib, jb);
    }
  }
  return out;
}

template <bool Parallel>
ComplexMatrix conjugate_local_impl(const ComplexMatrix& rho, std::size_t dim_a, std::size_t dim_b,
                                   const ComplexMatrix& op_a, const ComplexMatrix& op_b) {
  check_local(rho, dim_a, dim_b, op_a, op_b);
  const ComplexMatrix half = left_local<Parallel>(rho, dim_a, dim_b, op_a, op_b);
  return left_local<Parallel>(half.adjoint(), dim_a, dim_b, op_a, op_b).adjoint();
}

}  // namespace

namespace serial {
ComplexMatrix matmul(const ComplexMatrix& a, const ComplexMatrix& b) { return matmul_impl<false>(a, b); }
ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) { return kron_impl<false>(a, b); }
ComplexMatrix conjugate_local(const ComplexMatrix& rho, std::size_t dim_a, std::size_t dim_b,
                              const ComplexMatrix& op_a, const ComplexMatrix& op_b) {
  return conjugate_local_impl<false>(rho, dim_a, dim_b, op_a, op_b);
}
}  // namespace serial

namespace parallel {
ComplexMatrix matmul(const ComplexMatrix& a, const ComplexMatrix& b) { return matmul_impl<true>(a, b); }
ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) { return kron_impl<true>(a, b); }
ComplexMatrix conjugate_local(const ComplexMatrix& rho, std::size_t dim_a, std::size_t dim_b,
                              const ComplexMatrix& op_a, const ComplexMatrix& op_b) {
  return conjugate_local_impl<true>(rho, dim_a, dim_b, op_a, op_b);
}
}  // namespace parallel

ComplexMatrix matmul(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.rows() * a.cols() * b.cols() >= kParallelWork) return parallel::matmul(a, b);
  return serial::matmul(a, b);
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.size() * b.size() >= kParallelWork) return parallel::kron(a, b);
  return serial::kron(a, b);
}

ComplexMatrix conjugate_local(const ComplexMatrix& rho, std::size_t dim_a, std::size_t dim_b,
                              const ComplexMatrix& op_a, const ComplexMatrix& op_b) {
  if (rho.size() * (dim_a + dim_b) >= kParallelWork) return parallel::conjugate_local(rho, dim_a, dim_b, op_a, op_b);
  return serial::conjugate_local(rho, dim_a, dim_b, op_a, op_b);
}

int max_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

void run_jobs(std::size_t count, Execution execution, const std::function<void(std::size_t)>& job) {
  std::vector<std::exception_ptr> errors(count);
  const auto n = static_cast<long long>(count);
  auto guarded = [&](long long j) {
    try {
      job(static_cast<std::size_t>(j));
    } catch (...) {
      errors[static_cast<std::size_t>(j)] = std::current_exception();
    }
  };
  if (execution == Execution::parallel) {
#pragma omp parallel for schedule(dynamic)
    for (long long j = 0; j < n; ++j) guarded(j);
  } else {
    for (long long j = 0; j < n; ++j) guarded(j);
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace entkit::kernels
