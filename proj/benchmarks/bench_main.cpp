#include <benchmark/benchmark.h>

#include "vortstab/analysis.hpp"
#include "vortstab/determinants.hpp"
#include "vortstab/operators.hpp"

using namespace vortstab;

namespace {

void BM_AssembleALambda(benchmark::State& state) {
  const auto s = make_single_mode_shear(4);
  const auto b = build_basis(Subspace{4, 1, 3, static_cast<int>(state.range(0))});
  for (auto _ : state) benchmark::DoNotOptimize(op_A_lambda(b, s, 0.5).entries.data());
  state.SetLabel("n=" + std::to_string(b->size()));
}
BENCHMARK(BM_AssembleALambda)->Arg(16)->Arg(32)->Arg(64)->Unit(benchmark::kMicrosecond);

void BM_Det2(benchmark::State& state) {
  const auto s = make_single_mode_shear(4);
  const auto b = build_basis(Subspace{4, 1, 3, static_cast<int>(state.range(0))});
  const DispersionFamily fam(b, s, 0.5);
  for (auto _ : state) benchmark::DoNotOptimize(fam.D(0.0).value);
}
BENCHMARK(BM_Det2)->Arg(16)->Arg(32)->Arg(64)->Unit(benchmark::kMicrosecond);

void BM_LogDerivative(benchmark::State& state) {
  const auto s = make_single_mode_shear(4);
  const auto b = build_basis(Subspace{4, 1, 3, static_cast<int>(state.range(0))});
  const DispersionFamily fam(b, s, 0.5);
  for (auto _ : state) benchmark::DoNotOptimize(fam.logderiv_mu({-1.0, 0.5}));
}
BENCHMARK(BM_LogDerivative)->Arg(16)->Arg(32)->Arg(64)->Unit(benchmark::kMicrosecond);

void BM_EigLvor(benchmark::State& state) {
  const auto s = make_single_mode_shear(4);
  const auto b = build_basis(Subspace{4, 1, 3, static_cast<int>(state.range(0))});
  const CMatrix lvor = op_Lvor(b, s).entries;
  for (auto _ : state) benchmark::DoNotOptimize(linalg::eig(lvor).eigenvalues.data());
}
BENCHMARK(BM_EigLvor)->Arg(16)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_EigFull2D(benchmark::State& state) {
  const auto n = static_cast<int>(state.range(0));
  const auto b = build_basis(Full2D{n, n});
  const CMatrix a = op_A_lambda(b, make_single_mode_shear(4), 0.5).entries;
  for (auto _ : state) benchmark::DoNotOptimize(linalg::eig(a).eigenvalues.data());
  state.SetLabel("n=" + std::to_string(b->size()));
}
BENCHMARK(BM_EigFull2D)->Arg(4)->Arg(8)->Unit(benchmark::kMillisecond);

void BM_ContourCount(benchmark::State& state) {
  const auto s = make_single_mode_shear(4);
  const auto b = build_basis(Subspace{4, 1, 3, 16});
  const DispersionFamily fam(b, s, 0.5);
  for (auto _ : state) benchmark::DoNotOptimize(contour_count(fam, Rect{-5.0, 25.0, -1.0, 1.0}).winding);
}
BENCHMARK(BM_ContourCount)->Unit(benchmark::kMillisecond);

void BM_Scan(benchmark::State& state) {
  const auto s = make_single_mode_shear(4);
  const auto b = build_basis(Subspace{4, 1, 3, static_cast<int>(state.range(0))});
  ScanOptions o;
  o.grid_points = 64;
  for (auto _ : state) benchmark::DoNotOptimize(scan_unstable(b, s, o).roots.size());
}
BENCHMARK(BM_Scan)->Arg(16)->Arg(32)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
