#pragma once

// Data-parallel inner loops. Every kernel has a serial reference and an
// OpenMP version; both produce bit-identical results because each output
// element is computed by the same sequence of operations.

#include <cstddef>
#include <functional>

#include "entkit/linalg.hpp"

namespace entkit::kernels {

enum class Execution { serial, parallel };

namespace serial {
ComplexMatrix matmul(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);
/// (A (x) B) rho (A (x) B)^dagger without forming the Kronecker product.
ComplexMatrix conjugate_local(const ComplexMatrix& rho, std::size_t dim_a, std::size_t dim_b,
                              const ComplexMatrix& op_a, const ComplexMatrix& op_b);
}  // namespace serial

namespace parallel {
ComplexMatrix matmul(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix conjugate_local(const ComplexMatrix& rho, std::size_t dim_a, std::size_t dim_b,
                              const ComplexMatrix& op_a, const ComplexMatrix& op_b);
}  // namespace parallel

/// Picks the parallel kernel once the work exceeds a small threshold.
ComplexMatrix matmul(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix conjugate_local(const ComplexMatrix& rho, std::size_t dim_a, std::size_t dim_b,
                              const ComplexMatrix& op_a, const ComplexMatrix& op_b);

int max_threads();

/// Runs job(0) .. job(count - 1), possibly concurrently. The first exception
/// by job index is rethrown on the calling thread after all jobs finish.
void run_jobs(std::size_t count, Execution execution, const std::function<void(std::size_t)>& job);

}  // namespace entkit::kernels
