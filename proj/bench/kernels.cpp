#include <benchmark/benchmark.h>

#include "movcat/campaign.hpp"
#include "movcat/generate.hpp"
#include "movcat/movability.hpp"
#include "movcat/systems.hpp"

using namespace movcat;

namespace {

Execution mode(const benchmark::State & state)
{
    return state.range(0) == 0 ? Execution::serial : Execution::parallel;
}

void label(benchmark::State & state)
{
    state.SetLabel(state.range(0) == 0 ? "serial" : "parallel");
}

// Product of two generated categories, large enough to give each thread work.
FiniteCategory product_input()
{
    Rng rng(3);
    GenParams gp;
    gp.max_objects = 5;
    gp.max_morphisms = 20;
    auto a = random_category(rng, gp).category;
    auto b = random_category(rng, gp).category;
    return product_category({a, b}).category;
}

void strongly_movable(benchmark::State & state)
{
    static const auto k = product_input();
    for (auto _ : state)
        benchmark::DoNotOptimize(check_strongly_movable(k, mode(state)));
    label(state);
}

void sm1(benchmark::State & state)
{
    GenParams gp;
    gp.index_shape = IndexShape::forked;
    static const auto doc = generate_instance(InstanceKind::system, 11, gp);
    const auto & s = doc.system("S").system;
    for (auto _ : state)
        benchmark::DoNotOptimize(check_sm1(s, mode(state)));
    label(state);
}

void star(benchmark::State & state)
{
    static const auto h = [] {
        Rng rng(5);
        const auto c = product_input();
        return random_copresheaf(rng, c, 3);
    }();
    for (auto _ : state)
        benchmark::DoNotOptimize(check_star(h, mode(state)));
    label(state);
}

void campaign(benchmark::State & state)
{
    for (auto _ : state)
        benchmark::DoNotOptimize(run_campaign("product", 0, 63, {}, mode(state)));
    label(state);
}

} // namespace

BENCHMARK(strongly_movable)->Arg(0)->Arg(1)->Unit(benchmark::kMicrosecond);
BENCHMARK(sm1)->Arg(0)->Arg(1)->Unit(benchmark::kMicrosecond);
BENCHMARK(star)->Arg(0)->Arg(1)->Unit(benchmark::kMicrosecond);
BENCHMARK(campaign)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
