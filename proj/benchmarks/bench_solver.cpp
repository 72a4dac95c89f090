#include <benchmark/benchmark.h>

#include <flrw_dirac/initial_data.hpp>
#include <flrw_dirac/solver.hpp>

namespace {

flrw::Model bench_model(flrw::NonlinearityKind kind) {
  flrw::Model md;
  md.cosmology = {2.0 / 3.0, 1.0};
  md.mass = {1.0, 0.2};
  md.nonlinearity.kind = kind;
  return md;
}

flrw::SpinorField bench_data(const flrw::Grid& g) {
  flrw::InitialDataSpec s;
  s.family = flrw::InitialFamily::random_gaussian;
  s.width = g.box_length / 10.0;
  s.seed = 5;
  return flrw::make_initial_data(s, g, 1.0);
}

void BM_Rhs(benchmark::State& state) {
  const int dim = static_cast<int>(state.range(0));
  const int n = static_cast<int>(state.range(1));
  const flrw::Grid g{dim, n, 20.0};
  flrw::DiracOperator op(bench_model(flrw::NonlinearityKind::none), g);
  const auto f = bench_data(g);
  flrw::SpinorField out(g, 1.0);
  for (auto _ : state) {
    op.rhs(f, 1.0, out);
    benchmark::DoNotOptimize(out.data.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(g.points()));
}
BENCHMARK(BM_Rhs)->Args({1, 256})->Args({1, 4096})->Args({3, 32});

void BM_RhsNonlinear(benchmark::State& state) {
  const flrw::Grid g{1, static_cast<int>(state.range(0)), 20.0};
  flrw::DiracOperator op(bench_model(flrw::NonlinearityKind::power_abs), g);
  const auto f = bench_data(g);
  flrw::SpinorField out(g, 1.0);
  for (auto _ : state) {
    op.rhs(f, 1.0, out);
    benchmark::DoNotOptimize(out.data.data());
  }
}
BENCHMARK(BM_RhsNonlinear)->Arg(256)->Arg(4096);

void BM_Step(benchmark::State& state) {
  const flrw::Grid g{3, static_cast<int>(state.range(0)), 20.0};
  flrw::DiracOperator op(bench_model(flrw::NonlinearityKind::none), g);
  auto f = bench_data(g);
  const double dt = op.max_dt(1.0, 0.5);
  for (auto _ : state) {
    auto next = op.step(f, dt, 0.5);
    benchmark::DoNotOptimize(next.data.data());
  }
}
BENCHMARK(BM_Step)->Arg(16)->Arg(32);

}  // namespace
