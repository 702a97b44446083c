#include <benchmark/benchmark.h>

#include "mcomp/bpb_operator.hpp"
#include "mcomp/cantor.hpp"
#include "mcomp/random.hpp"

using namespace mcomp;

namespace {

template <class S>
DyadicMeasure<S> leaves(unsigned depth) {
  Rng rng(depth);
  std::vector<Rational> v(std::size_t{1} << depth);
  for (auto& x : v) x = rng.rational(50);
  Rational t = 0;
  for (const auto& x : v) t += x;
  if (t < 0) v[0] -= t;
  return convert_dyadic<S>(DyadicMeasure<Rational>(depth, v));
}

OperatorTable<Rational> table(std::size_t n) {
  Rng rng(n);
  PointSet pts;
  for (std::size_t i = 0; i < n; ++i) pts.push_back("p" + std::to_string(i));
  std::vector<AtomicMeasure<Rational>> rows;
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<Rational> w(n);
    for (auto& x : w) x = rng.rational(20);
    rows.emplace_back(pts, w);
  }
  return OperatorTable<Rational>(pts, rows);
}

template <class S>
void BM_CantorKernel(benchmark::State& state) {
  const auto mu = leaves<S>(static_cast<unsigned>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(compensate_cantor(mu));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(mu.size()));
}

template <class S>
void BM_CantorSerial(benchmark::State& state) {
  const auto mu = leaves<S>(static_cast<unsigned>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(reference::compensate_cantor_serial(mu));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(mu.size()));
}

template <class S>
void BM_RadiusParallel(benchmark::State& state) {
  const auto T = convert_operator<S>(table(static_cast<std::size_t>(state.range(0))));
  for (auto _ : state) benchmark::DoNotOptimize(numerical_radius_bruteforce(T));
}

template <class S>
void BM_RadiusSerial(benchmark::State& state) {
  const auto T = convert_operator<S>(table(static_cast<std::size_t>(state.range(0))));
  for (auto _ : state) benchmark::DoNotOptimize(reference::numerical_radius_serial(T));
}

}  // namespace

BENCHMARK(BM_CantorKernel<Rational>)->DenseRange(4, 12, 4);
BENCHMARK(BM_CantorSerial<Rational>)->DenseRange(4, 8, 4);
BENCHMARK(BM_CantorKernel<double>)->DenseRange(8, 20, 4);
BENCHMARK(BM_CantorSerial<double>)->DenseRange(8, 12, 4);
BENCHMARK(BM_RadiusParallel<double>)->DenseRange(6, 12, 3);
BENCHMARK(BM_RadiusSerial<double>)->DenseRange(6, 12, 3);
BENCHMARK(BM_RadiusParallel<Rational>)->Arg(8);
BENCHMARK(BM_RadiusSerial<Rational>)->Arg(8);

BENCHMARK_MAIN();
