#include <benchmark/benchmark.h>

#include "halfourier/kernels.hpp"
#include "halfourier/memory.hpp"
#include "halfourier/oscquad.hpp"
#include "halfourier/specfun.hpp"

namespace {

using namespace halfourier;

void bm_half_fourier_exp(benchmark::State& state) {
    const auto k = kernels::parse_kernel("exp(delta=1)");
    const double lambda = static_cast<double>(state.range(0));
    for (auto _ : state) {
        auto r = oscquad::half_fourier(k, std::nullopt, lambda);
        benchmark::DoNotOptimize(r.value);
    }
}
BENCHMARK(bm_half_fourier_exp)->Arg(10)->Arg(1000)->Arg(100000);

void bm_half_fourier_singexp(benchmark::State& state) {
    const auto k = kernels::parse_kernel("singexp(p=0.5,delta=1)");
    const double lambda = static_cast<double>(state.range(0));
    for (auto _ : state) {
        auto r = oscquad::half_fourier(k, std::nullopt, lambda);
        benchmark::DoNotOptimize(r.value);
    }
}
BENCHMARK(bm_half_fourier_singexp)->Arg(10)->Arg(1000)->Arg(100000);

void bm_tail_integral(benchmark::State& state) {
    const double beta = static_cast<double>(state.range(0));
    for (auto _ : state) {
        auto v = specfun::tail_integral(1.5, beta);
        benchmark::DoNotOptimize(v);
    }
}
BENCHMARK(bm_tail_integral)->Arg(1)->Arg(10)->Arg(100);

void bm_simulate_mode(benchmark::State& state) {
    const auto k = kernels::parse_kernel("exp(delta=1)");
    const double t_max = static_cast<double>(state.range(0));
    for (auto _ : state) {
        auto traj = memory::simulate_mode({1.0, k, nullptr, 1.0, 0.0},
                                          t_max, 0.05);
        benchmark::DoNotOptimize(traj.samples.back().energy);
    }
}
BENCHMARK(bm_simulate_mode)->Arg(10)->Arg(50);

}  // namespace

BENCHMARK_MAIN();
