#include <benchmark/benchmark.h>

#include <cmath>

#include "wavekin/collision.hpp"
#include "wavekin/convolution.hpp"
#include "wavekin/rng.hpp"

using namespace wavekin;

static void BM_CubicOperator(benchmark::State& st) {
  TorusSpec spec;
  spec.L = static_cast<double>(st.range(0));
  spec.cutoff = 2.0;
  const Lattice lat(spec);
  CubicOperator op(lat, 0.1, 4.0, true);
  std::vector<cplx> w(lat.size()), out(lat.size());
  for (std::size_t i = 0; i < w.size(); ++i) w[i] = cplx(std::cos(0.3 * i), std::sin(0.7 * i));
  for (auto _ : st) {
    op.cubic(0.5, w, out);
    benchmark::DoNotOptimize(out.data());
  }
  st.counters["modes"] = static_cast<double>(lat.size());
}
BENCHMARK(BM_CubicOperator)->Arg(4)->Arg(8)->Arg(16)->Unit(benchmark::kMillisecond);

static void BM_CollisionK(benchmark::State& st) {
  const Spectrum g = [](const Vec3& k) { return std::exp(-(k[0] * k[0] + k[1] * k[1])); };
  ResonantGeometry geo;
  ResonantQuadrature q;
  q.angular = static_cast<int>(st.range(0));
  for (auto _ : st) benchmark::DoNotOptimize(collision_K(g, {0.4, 0.2, 0.0}, geo, q));
}
BENCHMARK(BM_CollisionK)->Arg(16)->Arg(32)->Unit(benchmark::kMillisecond);

static void BM_PhiloxNormalPair(benchmark::State& st) {
  const CounterRng rng(42);
  std::uint64_t i = 0;
  for (auto _ : st) benchmark::DoNotOptimize(rng.normal_pair(1, i++, 3));
}
BENCHMARK(BM_PhiloxNormalPair);

BENCHMARK_MAIN();
