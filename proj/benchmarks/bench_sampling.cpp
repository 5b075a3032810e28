#include <benchmark/benchmark.h>

#include "rmt/constructions.hpp"
#include "rmt/distributions.hpp"

namespace {

void BM_SampleGaussian(benchmark::State& state) {
    const auto count = static_cast<std::size_t>(state.range(0));
    const rmt::EntryDistribution d = rmt::EntryDistribution::gaussian();
    std::uint64_t seed = 0;
    for (auto _ : state) benchmark::DoNotOptimize(rmt::sample(d, ++seed, count));
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(count));
}

void BM_SampleShiftedBernoulli(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const rmt::ShiftedEnsemble e(rmt::adversarial_matrix(n, static_cast<double>(n)),
                                 rmt::EntryDistribution::bernoulli());
    std::uint64_t seed = 0;
    for (auto _ : state) benchmark::DoNotOptimize(rmt::sample_shifted(e, ++seed));
}

} // namespace

BENCHMARK(BM_SampleGaussian)->Arg(10000)->Arg(100000);
BENCHMARK(BM_SampleShiftedBernoulli)->Arg(50)->Arg(100);
