#include <benchmark/benchmark.h>

#include "rmt/matrix.hpp"
#include "rmt/rng.hpp"
#include "rmt/spectral.hpp"
#include "rmt/svd.hpp"

namespace {

rmt::DenseMatrix gaussian_matrix(std::size_t n, std::uint64_t seed) {
    rmt::DenseMatrix m(n, n);
    rmt::CounterRng rng(seed, 0xBE);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) m(i, j) = rng.next_gaussian();
    return m;
}

void BM_LeastSingularFastPath(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const rmt::DenseMatrix m = gaussian_matrix(n, 1);
    for (auto _ : state) benchmark::DoNotOptimize(rmt::least_singular_value(m));
}

void BM_FullSpectrum(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const rmt::DenseMatrix m = gaussian_matrix(n, 2);
    for (auto _ : state) benchmark::DoNotOptimize(rmt::singular_values(m));
}

void BM_JacobiOracle(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const rmt::DenseMatrix m = gaussian_matrix(n, 3);
    for (auto _ : state) benchmark::DoNotOptimize(rmt::jacobi_singular_values(m));
}

void BM_OperatorNorm(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const rmt::DenseMatrix m = gaussian_matrix(n, 4);
    for (auto _ : state) benchmark::DoNotOptimize(rmt::operator_norm(m, 1e-9));
}

} // namespace

BENCHMARK(BM_LeastSingularFastPath)->Arg(50)->Arg(100)->Arg(200);
BENCHMARK(BM_FullSpectrum)->Arg(50)->Arg(100);
BENCHMARK(BM_JacobiOracle)->Arg(30)->Arg(50);
BENCHMARK(BM_OperatorNorm)->Arg(50)->Arg(100)->Arg(200);

BENCHMARK_MAIN();
