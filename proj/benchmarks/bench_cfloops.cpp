#include "cfloops/continuant.hpp"
#include "cfloops/fraction.hpp"
#include "cfloops/search.hpp"

#include <benchmark/benchmark.h>

using namespace cfloops;

namespace {

const Rational kQ(Integer(15), Integer(4));
const Path kLong{-2, 1, -1, 1, -1, 1, -1, 1, -1, 1, -1, 1, -6, 11, -1, 8, -1};

void BM_Eval(benchmark::State& state) {
    for (auto _ : state) {
        benchmark::DoNotOptimize(eval(kQ, kLong));
    }
}
BENCHMARK(BM_Eval);

void BM_ContinuantWeight(benchmark::State& state) {
    for (auto _ : state) {
        benchmark::DoNotOptimize(p2_weight_sq(kQ, kLong));
    }
}
BENCHMARK(BM_ContinuantWeight);

void BM_ClearedForm(benchmark::State& state) {
    const auto k = static_cast<std::size_t>(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(cleared_form(Integer(26), Integer(23), k));
    }
}
BENCHMARK(BM_ClearedForm)->DenseRange(4, 12, 4);

void BM_Diophantine(benchmark::State& state) {
    SearchBudget budget;
    budget.max_length = static_cast<std::size_t>(state.range(0));
    budget.threads = static_cast<unsigned>(state.range(1));
    for (auto _ : state) {
        benchmark::DoNotOptimize(diophantine_search_upto(Integer(7), Integer(2), budget));
    }
}
BENCHMARK(BM_Diophantine)->Args({4, 1})->Args({6, 1})->Args({6, 4})->Unit(benchmark::kMillisecond);

void BM_Heuristic(benchmark::State& state) {
    SearchBudget budget;
    budget.beam_capacity = static_cast<std::size_t>(state.range(0));
    budget.heuristic_length = 20;
    budget.stop_at_first = true;
    for (auto _ : state) {
        benchmark::DoNotOptimize(heuristic_search(Rational(Integer(11), Integer(3)), budget));
    }
}
BENCHMARK(BM_Heuristic)->Arg(2000)->Arg(20000)->Unit(benchmark::kMillisecond);

void BM_BruteForce(benchmark::State& state) {
    for (auto _ : state) {
        benchmark::DoNotOptimize(brute_force_enum(Rational(Integer(5), Integer(3)), 3, 8));
    }
}
BENCHMARK(BM_BruteForce)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
