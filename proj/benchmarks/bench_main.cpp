#include <benchmark/benchmark.h>

#include "mpuc/dynamics.hpp"
#include "mpuc/floquet.hpp"
#include "mpuc/models.hpp"
#include "mpuc/repring.hpp"

using namespace mpuc;

namespace {

ModelParams params_n(int n) {
  ModelParams p;
  p.n = n;
  return p;
}

ModelParams params_d(int d) {
  ModelParams p;
  p.d = d;
  return p;
}

void BM_Instantiate(benchmark::State& st) {
  for (auto _ : st) benchmark::DoNotOptimize(instantiate("bilayer-swap", params_n(static_cast<int>(st.range(0)))));
}
BENCHMARK(BM_Instantiate)->Arg(3)->Arg(6)->Unit(benchmark::kMillisecond);

void BM_Classify(benchmark::State& st) {
  const SymmetricMpu s = instantiate("bilayer-swap", params_n(static_cast<int>(st.range(0))));
  for (auto _ : st) benchmark::DoNotOptimize(classify(s));
}
BENCHMARK(BM_Classify)->Arg(3)->Arg(6)->Unit(benchmark::kMillisecond);

void BM_ClassifyZdzd(benchmark::State& st) {
  const SymmetricMpu s = instantiate("zdzd-spt", params_d(static_cast<int>(st.range(0))));
  for (auto _ : st) benchmark::DoNotOptimize(classify(s));
}
BENCHMARK(BM_ClassifyZdzd)->Arg(2)->Arg(3)->Unit(benchmark::kMillisecond);

void BM_EvolveStep(benchmark::State& st) {
  const int d = static_cast<int>(st.range(0)), L = static_cast<int>(st.range(1));
  const SymmetricMpu s = instantiate("zdzd-spt", params_d(d));
  const PureState psi = product_state(L, s.d());
  for (auto _ : st) benchmark::DoNotOptimize(evolve(psi, s, 1));
  st.SetComplexityN(static_cast<long>(psi.amplitudes.size()));
}
BENCHMARK(BM_EvolveStep)->Args({2, 4})->Args({2, 6})->Args({3, 4})->Unit(benchmark::kMillisecond);

void BM_EntanglementSpectrum(benchmark::State& st) {
  const SymmetricMpu s = instantiate("zdzd-spt", params_d(2));
  const auto states = evolve(product_state(static_cast<int>(st.range(0)), s.d()), s, 3);
  for (auto _ : st) benchmark::DoNotOptimize(entanglement_spectrum(states.back(), static_cast<int>(st.range(0)) / 2));
}
BENCHMARK(BM_EntanglementSpectrum)->Arg(4)->Arg(6)->Arg(8);

void BM_Oracle(benchmark::State& st) {
  for (auto _ : st) benchmark::DoNotOptimize(analytic_oracle_zdzd(static_cast<int>(st.range(0)), 3));
}
BENCHMARK(BM_Oracle)->Arg(2)->Arg(4)->Arg(8);

void BM_SearchDecompositions(benchmark::State& st) {
  const RepVector rho = rep_vector(cyclic_group(3), {static_cast<int>(st.range(0)), static_cast<int>(st.range(0)), 0});
  for (auto _ : st) benchmark::DoNotOptimize(search_decompositions(rho));
}
BENCHMARK(BM_SearchDecompositions)->Arg(1)->Arg(2)->Arg(3)->Unit(benchmark::kMillisecond);

void BM_Divide(benchmark::State& st) {
  const RepVector rho = rep_vector(cyclic_group(4), {2, 1, 1, 0});
  const RepVector sq = decompose_tensor(rho, rho);
  for (auto _ : st) benchmark::DoNotOptimize(divide(sq, rho));
}
BENCHMARK(BM_Divide);

void BM_FloquetZdzd(benchmark::State& st) {
  const SymmetricMpu edge = instantiate("zdzd-spt", params_d(2));
  const FloquetUnitary f = build_zdzd_floquet(2, static_cast<int>(st.range(0)), 3);
  for (auto _ : st) benchmark::DoNotOptimize(measure_bulk_and_edge(f, edge));
}
BENCHMARK(BM_FloquetZdzd)->Arg(2)->Arg(3)->Arg(4)->Unit(benchmark::kMillisecond);

void BM_FloquetSwap(benchmark::State& st) {
  const SymmetricMpu s = instantiate("bilayer-swap", params_n(3));
  const SymmetricMpu edge = swap_edge_mpu(s.sf.u, s.sf.l, s.sf.r, s.rep);
  const FloquetUnitary f = build_swap_floquet(s.sf.u, s.sf.l, s.sf.r, s.rep, static_cast<int>(st.range(0)), 2);
  for (auto _ : st) benchmark::DoNotOptimize(measure_bulk_and_edge(f, edge));
}
BENCHMARK(BM_FloquetSwap)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
