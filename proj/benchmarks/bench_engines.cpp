#include <random>
#include <vector>

#include <benchmark/benchmark.h>

#include "bvs/global_bounds.hpp"
#include "bvs/posterior.hpp"
#include "bvs/simulation.hpp"

using namespace bvs;

namespace {

Dataset dataset(DesignKind design, int n, int p) {
    Scenario sc;
    sc.design = design;
    sc.n = n;
    sc.p = p;
    sc.pt = 3;
    sc.coefficients = {0.5, 0.4, 0.3};
    sc.bundles = {Bundle::zellner_betabinomial()};
    return generate(sc, 0);
}

void BM_OrthogonalDP(benchmark::State& st) {
    const int p = static_cast<int>(st.range(0));
    LinearCache c(dataset(DesignKind::Orthogonal, p + 10, p));
    const auto coef = CoefPriorSpec::zellner_unknown(p + 10);
    ModelPrior prior(ModelPriorSpec::beta_binomial(p, p));
    for (auto _ : st) benchmark::DoNotOptimize(orthogonal_dp_posterior(c, coef, prior));
}
BENCHMARK(BM_OrthogonalDP)->Arg(100)->Arg(500)->Unit(benchmark::kMillisecond);

void BM_Enumerate(benchmark::State& st) {
    const int p = static_cast<int>(st.range(0));
    const auto d = dataset(DesignKind::Equicorrelated, 100, p);
    const auto coef = CoefPriorSpec::zellner_unknown(100);
    ModelPrior prior(ModelPriorSpec::beta_binomial(p, p));
    for (auto _ : st) {
        LinearCache c(d);
        benchmark::DoNotOptimize(enumerate_posterior(c, coef, prior));
    }
}
BENCHMARK(BM_Enumerate)->Arg(10)->Arg(14)->Unit(benchmark::kMillisecond);

void BM_GibbsSweeps(benchmark::State& st) {
    const int p = static_cast<int>(st.range(0));
    const auto d = dataset(DesignKind::Equicorrelated, 2 * p, p);
    const auto coef = CoefPriorSpec::zellner_unknown(2 * p);
    ModelPrior prior(ModelPriorSpec::beta_binomial(p, p));
    GibbsConfig cfg;
    cfg.sweeps = 1000;
    cfg.burn_in = 100;
    for (auto _ : st) {
        LinearCache c(d);
        benchmark::DoNotOptimize(gibbs_posterior(c, coef, prior, cfg));
    }
    st.SetItemsProcessed(st.iterations() * cfg.sweeps);
}
BENCHMARK(BM_GibbsSweeps)->Arg(20)->Arg(100)->Unit(benchmark::kMillisecond);

void BM_BoundCurves(benchmark::State& st) {
    std::vector<int> grid;
    for (int n = 50; n <= 2000; n += 50) grid.push_back(n);
    const int case_id = static_cast<int>(st.range(0));
    for (auto _ : st) benchmark::DoNotOptimize(bound_curves(case_id, grid));
}
BENCHMARK(BM_BoundCurves)->Arg(1)->Arg(3)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
