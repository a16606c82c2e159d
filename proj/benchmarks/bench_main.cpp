// Microbenchmarks for the hot paths: the radix-p transform, coset bias
// sweeps, quadratic-phase sweeps, and instance assembly.

#include <benchmark/benchmark.h>

#include "regulab/construction.hpp"
#include "regulab/fourier.hpp"
#include "regulab/quadratic.hpp"

using namespace regulab;

namespace {

DensityFunction make_f(std::uint32_t p, std::uint32_t n) {
    CounterRng rng(42, 0);
    return random_function(p, n, rng);
}

void BM_full_spectrum(benchmark::State& state) {
    std::uint32_t p = static_cast<std::uint32_t>(state.range(0));
    std::uint32_t n = static_cast<std::uint32_t>(state.range(1));
    DensityFunction f = make_f(p, n);
    for (auto _ : state) benchmark::DoNotOptimize(full_spectrum(f));
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(f.size()));
}
BENCHMARK(BM_full_spectrum)->Args({2, 10})->Args({2, 14})->Args({3, 7})->Args({3, 9});

void BM_coset_regularity(benchmark::State& state) {
    std::uint32_t n = static_cast<std::uint32_t>(state.range(0));
    std::uint32_t codim = static_cast<std::uint32_t>(state.range(1));
    DensityFunction f = make_f(2, n);
    Subspace H = Subspace::coordinate_window(2, n, codim, n - codim);
    for (auto _ : state) benchmark::DoNotOptimize(regularity_check(f, H, 0.05));
}
BENCHMARK(BM_coset_regularity)->Args({10, 3})->Args({12, 4})->Args({14, 4});

void BM_quadratic_bias(benchmark::State& state) {
    std::uint32_t p = 3, n = static_cast<std::uint32_t>(state.range(0));
    unsigned jobs = static_cast<unsigned>(state.range(1));
    DensityFunction f = make_f(p, n);
    Atom full;
    for (std::uint64_t x = 0; x < f.size(); ++x) full.points.push_back(x);
    for (auto _ : state) benchmark::DoNotOptimize(quadratic_bias(f, full, jobs));
}
BENCHMARK(BM_quadratic_bias)->Args({3, 1})->Args({4, 1})->Args({4, 2});

void BM_build_instance(benchmark::State& state) {
    std::uint32_t n = static_cast<std::uint32_t>(state.range(0));
    std::vector<double> w(4, 0.2);
    for (auto _ : state) benchmark::DoNotOptimize(build_instance(2, n, w, 7));
}
BENCHMARK(BM_build_instance)->Arg(10)->Arg(14);

void BM_u3_norm(benchmark::State& state) {
    std::uint32_t p = static_cast<std::uint32_t>(state.range(0));
    std::uint32_t n = static_cast<std::uint32_t>(state.range(1));
    DensityFunction f = make_f(p, n).balanced();
    for (auto _ : state) benchmark::DoNotOptimize(u3_norm(f));
}
BENCHMARK(BM_u3_norm)->Args({2, 8})->Args({3, 5});

}  // namespace

BENCHMARK_MAIN();
