#include <benchmark/benchmark.h>

#include "rmtcorr/simulator.hpp"
#include "rmtcorr/spectrum.hpp"
#include "rmtcorr/transform.hpp"

namespace {

rmtcorr::FactorModelConfig config_for(std::size_t per_sector, std::size_t length) {
    rmtcorr::FactorModelConfig c;
    c.stocks = 5 * per_sector;
    c.length = length;
    c.sector_sizes.assign(5, per_sector);
    c.n_st = c.stocks * 4 / 25;
    c.n_bc = c.stocks * 4 / 25;
    return c;
}

void BM_Simulate(benchmark::State& state) {
    const auto config = config_for(static_cast<std::size_t>(state.range(0)) / 5, 2500);
    for (auto _ : state) benchmark::DoNotOptimize(rmtcorr::simulate(config));
}
BENCHMARK(BM_Simulate)->Arg(100)->Arg(250)->Unit(benchmark::kMillisecond);

void BM_Correlation(benchmark::State& state) {
    const auto market = rmtcorr::simulate(config_for(static_cast<std::size_t>(state.range(0)) / 5, 2500));
    for (auto _ : state) benchmark::DoNotOptimize(rmtcorr::correlation(market.returns));
}
BENCHMARK(BM_Correlation)->Arg(100)->Arg(250)->Unit(benchmark::kMillisecond);

void BM_Eigensolve(benchmark::State& state) {
    const auto market = rmtcorr::simulate(config_for(static_cast<std::size_t>(state.range(0)) / 5, 2500));
    const auto corr = rmtcorr::correlation(market.returns);
    for (auto _ : state) benchmark::DoNotOptimize(rmtcorr::eigensolve(corr));
}
BENCHMARK(BM_Eigensolve)->Arg(100)->Arg(250)->Unit(benchmark::kMillisecond);

void BM_ShuffleSurrogate(benchmark::State& state) {
    const auto market = rmtcorr::simulate(config_for(50, 2500));
    for (auto _ : state) {
        benchmark::DoNotOptimize(rmtcorr::shuffle_surrogate(market.returns, 1, 1));
    }
}
BENCHMARK(BM_ShuffleSurrogate)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
