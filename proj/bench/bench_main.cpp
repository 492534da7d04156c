// Serial reference kernels against their OpenMP versions.

#include <qhd/discriminant.hpp>
#include <qhd/lattice.hpp>
#include <qhd/search.hpp>

#include <benchmark/benchmark.h>

using namespace qhd;

namespace {

auto exec_of(const benchmark::State & state) -> Execution
{
    return state.range(0) ? Execution::Parallel : Execution::Serial;
}

void bm_sweep(benchmark::State & state)
{
    SearchOptions opts;
    opts.exec = exec_of(state);
    for (auto _ : state)
        benchmark::DoNotOptimize(sweep(Family::W, 2, 2, 2, opts));
}

void bm_self_isotropic(benchmark::State & state)
{
    // W(3,3,3): |D| in the tens of thousands
    auto form = discriminant_form(intersection_matrix(make_family({Family::W, 3, 3, 3})));
    for (auto _ : state)
        benchmark::DoNotOptimize(self_isotropic_subgroups(form, subgroup_limit(), exec_of(state)));
}

void bm_search(benchmark::State & state)
{
    auto gamma = make_family({Family::N, 2, 3, 1});
    SearchOptions opts;
    opts.exec = exec_of(state);
    for (auto _ : state)
        benchmark::DoNotOptimize(search_placements(gamma, opts));
}

} // namespace

BENCHMARK(bm_sweep)->ArgName("parallel")->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(bm_self_isotropic)->ArgName("parallel")->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(bm_search)->ArgName("parallel")->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
