#include <benchmark/benchmark.h>

#include "nfield/charpoly.hpp"
#include "nfield/discretize.hpp"
#include "nfield/quadrature.hpp"
#include "nfield/resolvent.hpp"
#include "nfield/spectrum.hpp"

namespace {

using nfield::cplx;

nfield::ModelParams hopf() { return nfield::ModelParams(1.0, 1.0, 4.220214885988226, {{3.0, 0.5}, {-5.5, 1.0}}); }

void BM_CharDet(benchmark::State& state) {
  const auto p = hopf();
  const cplx z{-0.3, 1.2};
  for (auto _ : state) benchmark::DoNotOptimize(nfield::char_det(z, p));
}
BENCHMARK(BM_CharDet);

void BM_NewtonSolve(benchmark::State& state) {
  const auto p = hopf();
  for (auto _ : state) benchmark::DoNotOptimize(nfield::newton_solve({0.0, 1.6}, p, {}));
}
BENCHMARK(BM_NewtonSolve);

void BM_Resolve(benchmark::State& state) {
  const auto p = hopf();
  const nfield::SpatialGrid grid(static_cast<int>(state.range(0)));
  const nfield::CVector h = nfield::CVector::Ones(grid.size());
  for (auto _ : state) benchmark::DoNotOptimize(nfield::resolve(cplx{1.0, 0.0}, h, p, grid));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Resolve)->Arg(401)->Arg(1601)->Arg(6401)->Complexity();

void BM_Simulate(benchmark::State& state) {
  const auto p = hopf();
  const int m = static_cast<int>(state.range(0));
  const auto dm = nfield::build(m, p);
  const nfield::NodeHistory phi = [](double, int) { return 0.01; };
  for (auto _ : state) benchmark::DoNotOptimize(nfield::simulate(dm, phi, 20.0, dm.delta / 4));
}
BENCHMARK(BM_Simulate)->Arg(20)->Arg(50)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
