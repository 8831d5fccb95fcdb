#include "csege/dephasing.hpp"
#include "csege/ensembles.hpp"
#include "csege/negf.hpp"
#include "csege/rng.hpp"

#include <benchmark/benchmark.h>

namespace {

using namespace csege;

const Basis& basis65() {
  static const Basis b = enumerate_basis({6, 5});
  return b;
}

void BM_SampleEge(benchmark::State& state) {
  const int k = static_cast<int>(state.range(0));
  std::uint64_t r = 0;
  for (auto _ : state) benchmark::DoNotOptimize(sample_ege(basis65(), k, derive_seed(1, r++)));
}
BENCHMARK(BM_SampleEge)->DenseRange(1, 5);

void BM_SampleCsege(benchmark::State& state) {
  const auto c = state.range(0) == 0 ? CsConstruction::kProjection : CsConstruction::kCouplingOrbit;
  std::uint64_t r = 0;
  for (auto _ : state) benchmark::DoNotOptimize(sample_csege(basis65(), 3, derive_seed(1, r++), c));
}
BENCHMARK(BM_SampleCsege)->Arg(0)->Arg(1);

void BM_Transmission(benchmark::State& state) {
  const ManyBodyMatrix h = sample_csege(basis65(), 3, 7);
  const ContactPair cp = transport_contacts(basis65(), 0.5);
  const TerminalSet all = cp.terminals();
  double e = -5.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(transmission(e, h, cp.in, cp.out, all));
    e = e > 5.0 ? -5.0 : e + 1e-3;
  }
}
BENCHMARK(BM_Transmission);

void BM_TotalCurrent(benchmark::State& state) {
  const ManyBodyMatrix h = sample_csege(basis65(), 3, 7);
  const ContactPair cp = transport_contacts(basis65(), 0.5);
  for (auto _ : state) benchmark::DoNotOptimize(total_current(h, cp));
}
BENCHMARK(BM_TotalCurrent)->Unit(benchmark::kMillisecond);

void BM_DephasedCurrent(benchmark::State& state) {
  const ManyBodyMatrix h = sample_csege(basis65(), 3, 7);
  const ContactPair cp = transport_contacts(basis65(), 0.5);
  const DephasingSpec deph{static_cast<double>(state.range(0)) / 100.0};
  for (auto _ : state) benchmark::DoNotOptimize(dephased_current(h, cp, deph));
}
BENCHMARK(BM_DephasedCurrent)->Arg(10)->Arg(300)->Arg(5000)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
