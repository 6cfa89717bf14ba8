// Serial against OpenMP paths of the parallel kernels. Both paths produce
// identical results, so the numbers compare like with like.

#include <benchmark/benchmark.h>

#include "entkit/asymptotics.hpp"
#include "entkit/kernels.hpp"
#include "entkit/measures.hpp"
#include "entkit/rng.hpp"
#include "entkit/states.hpp"

namespace {

using namespace entkit;
using kernels::Execution;

ComplexMatrix random_square(std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  return random_hermitian(n, rng);
}

template <Execution E>
void matmul(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto a = random_square(n, 1), b = random_square(n, 2);
  for (auto _ : state) {
    auto c = E == Execution::serial ? kernels::serial::matmul(a, b) : kernels::parallel::matmul(a, b);
    benchmark::DoNotOptimize(c.data().data());
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(matmul<Execution::serial>)->RangeMultiplier(2)->Range(16, 256)->Complexity(benchmark::oNCubed);
BENCHMARK(matmul<Execution::parallel>)->RangeMultiplier(2)->Range(16, 256)->Complexity(benchmark::oNCubed);

template <Execution E>
void conjugate_local(benchmark::State& state) {
  const auto d = static_cast<std::size_t>(state.range(0));
  const auto rho = random_square(d * d, 3);
  const auto a = random_square(d, 4), b = random_square(d, 5);
  for (auto _ : state) {
    auto c = E == Execution::serial ? kernels::serial::conjugate_local(rho, d, d, a, b)
                                    : kernels::parallel::conjugate_local(rho, d, d, a, b);
    benchmark::DoNotOptimize(c.data().data());
  }
}
BENCHMARK(conjugate_local<Execution::serial>)->Arg(4)->Arg(8)->Arg(16);
BENCHMARK(conjugate_local<Execution::parallel>)->Arg(4)->Arg(8)->Arg(16);

template <Execution E>
void exhaustive_typical_set(benchmark::State& state) {
  const ProbVector q({0.9, 0.1});
  TypicalOptions options;
  options.mode = TypicalMode::exhaustive;
  options.execution = E;
  const auto n = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(typical_set(q, n, 0.3, options).size);
  state.SetItemsProcessed(state.iterations() * (std::int64_t{1} << n));
}
BENCHMARK(exhaustive_typical_set<Execution::serial>)->DenseRange(12, 18, 3)->Unit(benchmark::kMillisecond);
BENCHMARK(exhaustive_typical_set<Execution::parallel>)->DenseRange(12, 18, 3)->Unit(benchmark::kMillisecond);

template <Execution E>
void er_restarts(benchmark::State& state) {
  const auto rho = random_density(2, 2, 3, 7);
  OptimizerBudget budget;
  budget.restarts = static_cast<std::size_t>(state.range(0));
  budget.execution = E;
  for (auto _ : state) benchmark::DoNotOptimize(relative_entropy_entanglement(rho, budget).report.value);
}
BENCHMARK(er_restarts<Execution::serial>)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond);
BENCHMARK(er_restarts<Execution::parallel>)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
