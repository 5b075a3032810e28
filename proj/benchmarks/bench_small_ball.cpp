#include <benchmark/benchmark.h>

#include <cmath>

#include "rmt/small_ball.hpp"

namespace {

std::vector<std::complex<double>> flat(std::size_t n) {
    return std::vector<std::complex<double>>(n, 1.0 / std::sqrt(static_cast<double>(n)));
}

void BM_SmallBallExact(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const rmt::EntryDistribution d = rmt::EntryDistribution::bernoulli();
    const auto v = flat(n);
    for (auto _ : state) benchmark::DoNotOptimize(rmt::small_ball_exact(d, v, 0.0));
}

void BM_SmallBallMc(benchmark::State& state) {
    const auto trials = static_cast<std::int64_t>(state.range(0));
    const rmt::EntryDistribution d = rmt::EntryDistribution::gaussian();
    const auto v = flat(16);
    for (auto _ : state)
        benchmark::DoNotOptimize(rmt::small_ball_mc(d, v, 0.1, trials, 7));
}

void BM_FourierBound(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const rmt::EntryDistribution d = rmt::EntryDistribution::bernoulli();
    const auto v = flat(n);
    for (auto _ : state)
        benchmark::DoNotOptimize(rmt::fourier_upper_bound(d, v, 0.1, rmt::kDefaultEsseenC));
}

} // namespace

BENCHMARK(BM_SmallBallExact)->Arg(12)->Arg(16)->Arg(20);
BENCHMARK(BM_SmallBallMc)->Arg(10000)->Arg(100000);
BENCHMARK(BM_FourierBound)->Arg(8)->Arg(16);
