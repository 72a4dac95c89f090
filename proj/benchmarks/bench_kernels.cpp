#include <benchmark/benchmark.h>

#include <flrw_dirac/hypergeometric.hpp>
#include <flrw_dirac/kernels.hpp>

namespace {

void BM_Hyp2F1(benchmark::State& state) {
  const double z = static_cast<double>(state.range(0)) / 100.0;
  const std::complex<double> a(0.0, 0.6);
  for (auto _ : state) {
    benchmark::DoNotOptimize(flrw::hyp2f1({a, a, 1.0, z}));
  }
}
BENCHMARK(BM_Hyp2F1)->Arg(10)->Arg(50)->Arg(90);

flrw::KernelEval bench_eval() {
  flrw::KernelEval ke;
  ke.cosmology = {0.5, 1.0};
  ke.m = {0.3, 0.1};
  return ke;
}

void BM_KernelK1(benchmark::State& state) {
  const auto ke = bench_eval();
  for (auto _ : state) {
    benchmark::DoNotOptimize(flrw::kernel_K1(0.7, 3.0, ke));
  }
}
BENCHMARK(BM_KernelK1);

void BM_K1Multiplier(benchmark::State& state) {
  const auto ke = bench_eval();
  const double xi = static_cast<double>(state.range(0)) / 4.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(flrw::k1_multiplier(xi, 2.0, ke));
  }
}
BENCHMARK(BM_K1Multiplier)->Arg(1)->Arg(8)->Arg(40);

void BM_K1MultiplierTable(benchmark::State& state) {
  const flrw::Grid g{3, static_cast<int>(state.range(0)), 16.0};
  const auto ke = bench_eval();
  for (auto _ : state) {
    auto tab = flrw::k1_multipliers(g, 2.0, ke, false);
    benchmark::DoNotOptimize(tab.value.size());
  }
}
BENCHMARK(BM_K1MultiplierTable)->Arg(16)->Unit(benchmark::kMillisecond);

}  // namespace
