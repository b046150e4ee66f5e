#include <benchmark/benchmark.h>

#include "qrng/autocorr.hpp"
#include "qrng/rng.hpp"

namespace {

qrng::BitStream random_stream(std::size_t n) {
    qrng::RngEngine rng(1);
    std::vector<std::uint64_t> words((n + 63) / 64);
    for (auto& w : words) w = rng.next();
    return qrng::BitStream(std::move(words), n, qrng::Origin::simulated);
}

void BM_LagGammasSerial(benchmark::State& state) {
    const auto s = random_stream(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(qrng::lag_gammas(s, 2000, qrng::Parallelism::serial));
    state.SetBytesProcessed(state.iterations() * state.range(0) / 8 * 2000);
}

void BM_LagGammasOpenMP(benchmark::State& state) {
    const auto s = random_stream(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(qrng::lag_gammas(s, 2000, qrng::Parallelism::openmp));
    state.SetBytesProcessed(state.iterations() * state.range(0) / 8 * 2000);
}

void BM_AutocorrelationNaive(benchmark::State& state) {
    const auto s = random_stream(static_cast<std::size_t>(state.range(0)));
    std::size_t lag = 1;
    for (auto _ : state) {
        benchmark::DoNotOptimize(qrng::autocorrelation_naive(s, lag));
        lag = lag % 2000 + 1;
    }
    state.SetBytesProcessed(state.iterations() * state.range(0) / 8);
}

void BM_AutocorrelationPacked(benchmark::State& state) {
    const auto s = random_stream(static_cast<std::size_t>(state.range(0)));
    std::size_t lag = 1;
    for (auto _ : state) {
        benchmark::DoNotOptimize(qrng::autocorrelation(s, lag));
        lag = lag % 2000 + 1;
    }
    state.SetBytesProcessed(state.iterations() * state.range(0) / 8);
}

} // namespace

BENCHMARK(BM_LagGammasSerial)->Arg(1 << 20)->Arg(1 << 24)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_LagGammasOpenMP)->Arg(1 << 20)->Arg(1 << 24)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_AutocorrelationNaive)->Arg(1 << 20);
BENCHMARK(BM_AutocorrelationPacked)->Arg(1 << 20);

BENCHMARK_MAIN();
