#include <benchmark/benchmark.h>

#include "bf/operator_assembly.hpp"
#include "bf/spectral_engine.hpp"

namespace {

void BM_RieszProjector(benchmark::State& st) {
  const int band = static_cast<int>(st.range(0));
  const int nodes = static_cast<int>(st.range(1));
  const bf::FloquetFamily fam(bf::CapillaryParam(0.8), 0.01, band);
  const auto op = fam.at(0.02);
  for (auto _ : st) {
    auto p = bf::riesz_projector(op, 0.05, nodes);
    benchmark::DoNotOptimize(p.data());
  }
}
BENCHMARK(BM_RieszProjector)->ArgsProduct({{16, 32}, {64, 128}})->Unit(benchmark::kMillisecond);

void BM_NearZeroQuadruple(benchmark::State& st) {
  // at 0.8 the mode-2 pair crowds the cluster; 0 is well separated
  const bf::CapillaryParam kap(0.0);
  const bf::FloquetFamily fam(kap, 0.01, 32);
  const auto op = fam.at(0.01);
  for (auto _ : st) {
    const auto spec = bf::eig(op, true);
    auto q = bf::near_zero_quadruple(spec, kap, 0.01);
    benchmark::DoNotOptimize(q);
  }
}
BENCHMARK(BM_NearZeroQuadruple)->Unit(benchmark::kMillisecond);

}  // namespace
