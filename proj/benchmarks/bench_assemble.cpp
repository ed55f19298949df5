#include <benchmark/benchmark.h>

#include "bf/operator_assembly.hpp"

namespace {

const bf::CapillaryParam kKappa(0.8);

// the per-mu step once the profile and Sigma pieces are cached
void BM_AssembleAtMu(benchmark::State& st) {
  const int band = static_cast<int>(st.range(0));
  const bf::FloquetFamily fam(kKappa, 0.01, band);
  double mu = 0.01;
  for (auto _ : st) {
    auto op = fam.at(mu);
    benchmark::DoNotOptimize(op.matrix.data());
    mu = mu < 0.3 ? mu + 1e-3 : 0.01;
  }
}
BENCHMARK(BM_AssembleAtMu)->Arg(16)->Arg(32)->Arg(64);

}  // namespace
