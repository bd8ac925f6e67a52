#include <benchmark/benchmark.h>

#include "seqmct/confidence.hpp"
#include "seqmct/engine.hpp"
#include "seqmct/harness.hpp"
#include "seqmct/procedures.hpp"
#include "seqmct/rng.hpp"
#include "seqmct/sources.hpp"

using namespace seqmct;

namespace {

PValueVector random_pvalues(std::size_t m, std::uint64_t seed) {
    SplitMix64 rng(seed);
    PValueVector p(m);
    for (double& v : p) v = rng.next_double();
    return p;
}

void BM_BetaQuantile(benchmark::State& state) {
    SplitMix64 rng(1);
    for (auto _ : state) {
        const double a = 1.0 + rng.next_below(1000);
        const double b = 1.0 + rng.next_below(1000);
        benchmark::DoNotOptimize(beta_quantile(a, b, 1e-8));
    }
}
BENCHMARK(BM_BetaQuantile);

void BM_ClopperPearson(benchmark::State& state) {
    const auto k = static_cast<std::uint64_t>(state.range(0));
    SplitMix64 rng(2);
    for (auto _ : state) {
        benchmark::DoNotOptimize(clopper_pearson(rng.next_below(k + 1), k, 1e-8));
    }
}
BENCHMARK(BM_ClopperPearson)->Arg(100)->Arg(10000)->Arg(1000000);

void BM_BhClassify(benchmark::State& state) {
    const auto p = random_pvalues(static_cast<std::size_t>(state.range(0)), 3);
    for (auto _ : state) {
        benchmark::DoNotOptimize(bh_classify(p, 0.1));
    }
}
BENCHMARK(BM_BhClassify)->Arg(100)->Arg(1000)->Arg(10000);

void BM_OracleDraw(benchmark::State& state) {
    BernoulliOracle src(random_pvalues(16, 4), 5);
    for (auto _ : state) {
        benchmark::DoNotOptimize(src.draw(0, 1000));
    }
    state.SetItemsProcessed(state.iterations() * 1000);
}
BENCHMARK(BM_OracleDraw);

void BM_FullRun(benchmark::State& state) {
    const std::size_t m = static_cast<std::size_t>(state.range(0));
    SplitMix64 rng(6);
    PValueVector pstar;
    for (std::size_t i = 0; i < m; ++i) {
        pstar.push_back(i < m / 5 ? 0.002 * rng.next_double()
                                  : 0.2 + 0.8 * rng.next_double());
    }
    EngineConfig cfg;
    cfg.spending = {0.01, 10000.0, m};
    cfg.procedure = {ProcedureKind::BenjaminiHochberg, 0.1};
    cfg.c = m / 100;
    std::uint64_t seed = 0;
    for (auto _ : state) {
        BernoulliOracle src(pstar, ++seed);
        benchmark::DoNotOptimize(run(cfg, src));
    }
}
BENCHMARK(BM_FullRun)->Arg(100)->Arg(400)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
