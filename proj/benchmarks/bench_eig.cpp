#include <benchmark/benchmark.h>

#include "bf/operator_assembly.hpp"
#include "bf/spectral_engine.hpp"

namespace {

// reversible real form vs the plain complex QR
void BM_Eig(benchmark::State& st) {
  const int band = static_cast<int>(st.range(0));
  const bool reversible = st.range(1) != 0;
  const bf::FloquetFamily fam(bf::CapillaryParam(0.8), 0.01, band);
  const auto op = fam.at(0.02);
  for (auto _ : st) {
    auto spec = bf::eig(op, false, reversible);
    benchmark::DoNotOptimize(spec.eigenvalues.data());
  }
}
BENCHMARK(BM_Eig)->ArgsProduct({{16, 32, 64}, {0, 1}})->Unit(benchmark::kMillisecond);

}  // namespace
