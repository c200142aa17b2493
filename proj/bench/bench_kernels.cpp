// SPDX-License-Identifier: Apache-2.0
//
// Serial reference vs OpenMP for the two data-parallel kernels. Thread count
// follows HILLGAP_THREADS.
#include <benchmark/benchmark.h>

#include <random>

#include "hillgap/eigensolver.hpp"
#include "hillgap/kernels.hpp"
#include "hillgap/riesz.hpp"

using namespace hillgap;

namespace {

FourierSequence random_potential(long support) {
  std::mt19937_64 rng(17);
  std::normal_distribution<double> g;
  FourierSequence v(Parity::Even);
  for (long k = 2; k <= support; k += 2) {
    v.set(k, complex{g(rng), g(rng)} / double(k));
    v.set(-k, complex{g(rng), g(rng)} / double(k));
  }
  return v;
}

void contour(benchmark::State& state, Backend backend) {
  const int K = static_cast<int>(state.range(0));
  const OperatorShape shape{1, K};
  const Matrix b = build_B(random_potential(2 * K), 1, K).entries;
  const ContourSpec c = make_contour(1, 4, 64);
  std::vector<complex> weights;
  for (const complex z : c.offsets()) weights.push_back(z / double(c.nodes));
  const std::vector<complex> nodes = c.points();
  for (auto _ : state) {
    benchmark::DoNotOptimize(contour_sums(shape, b, c.center, nodes, weights, backend));
  }
}

void refine(benchmark::State& state, Backend backend) {
  const int K = static_cast<int>(state.range(0));
  const FourierSequence v = random_potential(2 * K);
  const EigenPairTable base = solve_pairs(v, 1, K, K / 4, RadiusRule::fixed_radius(20.0), false);
  for (auto _ : state) {
    EigenPairTable t = base;
    refine_pairs(t, v, backend);
    benchmark::DoNotOptimize(t.rows.data());
  }
}

}  // namespace

BENCHMARK_CAPTURE(contour, serial, Backend::Serial)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(contour, openmp, Backend::OpenMP)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(refine, serial, Backend::Serial)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(refine, openmp, Backend::OpenMP)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
