#include "riseval/association.hpp"
#include "riseval/coverage.hpp"
#include "riseval/montecarlo.hpp"
#include "riseval/specfun.hpp"

#include <benchmark/benchmark.h>

using namespace riseval;

static void BM_BesselK0(benchmark::State& state)
{
    double x = 0.37;
    for (auto _ : state) {
        benchmark::DoNotOptimize(specfun::bessel_k0(x));
        x = x < 50.0 ? x * 1.01 : 0.37;
    }
}
BENCHMARK(BM_BesselK0);

static void BM_Hypergeometric(benchmark::State& state)
{
    const double b = -2.0 / 2.8;
    double z = -0.1;
    for (auto _ : state) {
        benchmark::DoNotOptimize(specfun::gauss_2f1_negz(4.0, b, 1.0 + b, z));
        z = z > -1e6 ? z * 1.3 : -0.1;
    }
}
BENCHMARK(BM_Hypergeometric);

static void BM_AssociationProbability(benchmark::State& state)
{
    SystemParams p;
    p.lambda_r = static_cast<double>(state.range(0)) * 1e-6;
    for (auto _ : state) benchmark::DoNotOptimize(association::assoc_prob_los(p).a_l);
}
BENCHMARK(BM_AssociationProbability)->Arg(50)->Arg(400)->Unit(benchmark::kMicrosecond);

static void BM_SinrCoverage(benchmark::State& state)
{
    const SystemParams p;
    const auto th = coverage::ThresholdSet::from(p);
    const auto route = state.range(0) == 0 ? coverage::RisRoute::Reduced : coverage::RisRoute::Nested;
    for (auto _ : state) benchmark::DoNotOptimize(coverage::sinr_coverage(th, p, {}, route).total);
}
BENCHMARK(BM_SinrCoverage)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

static void BM_LaplaceLos(benchmark::State& state)
{
    const SystemParams p;
    for (auto _ : state) benchmark::DoNotOptimize(coverage::laplace_los(150.0, 50.0, p));
}
BENCHMARK(BM_LaplaceLos)->Unit(benchmark::kMicrosecond);

static void BM_SampleRealization(benchmark::State& state)
{
    const SystemParams p;
    mc::MCConfig cfg;
    long index = 0;
    for (auto _ : state) {
        const auto r = mc::sample_realization(cfg, p, index++);
        benchmark::DoNotOptimize(mc::link_sample(r, mc::associate(r, p), p).signal);
    }
}
BENCHMARK(BM_SampleRealization)->Unit(benchmark::kMicrosecond);
BENCHMARK_MAIN();
