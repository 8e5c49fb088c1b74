#include <benchmark/benchmark.h>

#include <vector>

#include "mrca/analytics.hpp"
#include "mrca/event_stream.hpp"
#include "mrca/lookdown.hpp"
#include "mrca/particles.hpp"
#include "mrca/random.hpp"

namespace {

mrca::lookdown::EngineConfig engine(int levels, double t_end, std::uint64_t seed) {
  mrca::lookdown::EngineConfig c;
  c.level_cap = levels;
  c.t_start = 0.0;
  c.t_end = t_end;
  c.burn_in = 20.0;
  c.seed = seed;
  return c;
}

// One unit of time, queried once per 0.1.
void BM_Sweep(benchmark::State& state) {
  const int levels = static_cast<int>(state.range(0));
  std::uint64_t seed = 1;
  for (auto _ : state) {
    const mrca::lookdown::EventStream s(engine(levels, 1.0, seed++));
    std::vector<double> q;
    for (int k = 1; k <= 10; ++k) q.push_back(0.1 * k);
    benchmark::DoNotOptimize(mrca::lookdown::sweep(s, q));
  }
}
BENCHMARK(BM_Sweep)->Arg(100)->Arg(300)->Arg(1000)->Unit(benchmark::kMillisecond);

void BM_MrcaTime(benchmark::State& state) {
  const mrca::lookdown::EventStream s(engine(static_cast<int>(state.range(0)), 1000.0, 2));
  double t = 10.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(mrca::lookdown::mrca_time(s, t));
    t = t >= 990.0 ? 10.0 : t + 1.0;
  }
}
BENCHMARK(BM_MrcaTime)->Arg(100)->Arg(1000)->Unit(benchmark::kMicrosecond);

void BM_Particles(benchmark::State& state) {
  std::uint64_t seed = 1;
  for (auto _ : state) {
    mrca::particles::ParticleSimConfig c;
    c.particle_cap = static_cast<int>(state.range(0));
    c.horizon = 100.0;
    c.seed = seed++;
    benchmark::DoNotOptimize(mrca::particles::simulate(c));
  }
}
BENCHMARK(BM_Particles)->Arg(100)->Arg(1000)->Unit(benchmark::kMillisecond);

void BM_PmfZ(benchmark::State& state) {
  int z = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(mrca::analytics::pmf_Z(z));
    z = (z + 1) % 20;
  }
}
BENCHMARK(BM_PmfZ);

void BM_PgfZ(benchmark::State& state) {
  double u = 0.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(mrca::analytics::pgf_Z(u));
    u = u >= 0.95 ? 0.0 : u + 0.05;
  }
}
BENCHMARK(BM_PgfZ);

void BM_SampleS(benchmark::State& state) {
  mrca::Rng rng(3);
  const auto i = static_cast<std::int64_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(mrca::analytics::sample_S(i, rng));
}
BENCHMARK(BM_SampleS)->Arg(2)->Arg(50)->Arg(1000);

void BM_SampleL(benchmark::State& state) {
  mrca::Rng rng(4);
  for (auto _ : state) benchmark::DoNotOptimize(mrca::analytics::sample_L(rng));
}
BENCHMARK(BM_SampleL);

}  // namespace

BENCHMARK_MAIN();
