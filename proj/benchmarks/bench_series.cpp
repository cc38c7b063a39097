#include <benchmark/benchmark.h>

#include "mspgw/qseries.hpp"
#include "mspgw/quintic.hpp"

using namespace mspgw;

namespace {

QSeries dense_series(int order, int seed) {
  QSeries f = QSeries::zero(order);
  unsigned long long s = 99991ull + static_cast<unsigned long long>(seed);
  for (int d = 0; d <= order; ++d) {
    s = s * 6364136223846793005ull + 1442695040888963407ull;
    f.set(d, Rational::of(static_cast<long long>((s >> 33) % 2001) - 1000, 997));
  }
  return f;
}

void BM_SeriesMul(benchmark::State& state) {
  int order = static_cast<int>(state.range(0));
  QSeries a = dense_series(order, 1), b = dense_series(order, 2);
  for (auto _ : state) benchmark::DoNotOptimize(a * b);
}
BENCHMARK(BM_SeriesMul)->Arg(12)->Arg(24)->Arg(48);

void BM_SeriesInverse(benchmark::State& state) {
  int order = static_cast<int>(state.range(0));
  QSeries a = dense_series(order, 3);
  a.set(0, 1);
  for (auto _ : state) benchmark::DoNotOptimize(a.inverse());
}
BENCHMARK(BM_SeriesInverse)->Arg(12)->Arg(24)->Arg(48);

void BM_QuinticI(benchmark::State& state) {
  int order = static_cast<int>(state.range(0));
  for (auto _ : state) {
    // quintic_I memoizes; rebuild the expensive part by hand each iteration
    QSeries i0 = QSeries::zero(order);
    for (int d = 0; d <= order; ++d)
      i0.set(d, Rational(factorial(static_cast<unsigned>(5 * d)),
                         boost::multiprecision::pow(
                             factorial(static_cast<unsigned>(d)), 5)));
    benchmark::DoNotOptimize(i0);
  }
}
BENCHMARK(BM_QuinticI)->Arg(12)->Arg(24);

void BM_RingFit(benchmark::State& state) {
  int order = 14;
  const YYGenerators& g = yy_generators(order);
  QSeries target = D(g.A1 * g.B1);
  for (auto _ : state)
    benchmark::DoNotOptimize(fit_in_ring(target, RingFitCaps{3, -1}));
}
BENCHMARK(BM_RingFit);

}  // namespace

BENCHMARK_MAIN();
