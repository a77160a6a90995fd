#include <benchmark/benchmark.h>

#include "mfdp/fftmech.hpp"
#include "mfdp/matcore.hpp"
#include "mfdp/optfact.hpp"
#include "mfdp/participation.hpp"
#include "mfdp/rng.hpp"
#include "mfdp/treestamp.hpp"
#include "mfdp/workloads.hpp"

using namespace mfdp;

namespace {

Vector random_vector(int n, std::uint64_t seed) {
    Vector v(n);
    for (int i = 0; i < n; ++i) v(i) = rng::keyed_gaussian(seed, i, 0);
    return v;
}

}  // namespace

static void BM_toeplitz_solve_spd(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const Vector col = fft_gram_first_col(n);
    const Vector rhs = random_vector(n, 1);
    for (auto _ : state)
        benchmark::DoNotOptimize(toeplitz_solve(col, col, rhs));
    state.SetComplexityN(n);
}
BENCHMARK(BM_toeplitz_solve_spd)->RangeMultiplier(4)->Range(256, 16384)->Complexity();

static void BM_fft_optimal_decode(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const Vector u = random_vector(2 * n, 2);
    for (auto _ : state)
        benchmark::DoNotOptimize(fft_optimal_decode(u, n));
    state.SetComplexityN(n);
}
BENCHMARK(BM_fft_optimal_decode)->RangeMultiplier(4)->Range(256, 4096)->Complexity();

static void BM_fft_prefix_release(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const Vector x = Vector::Constant(n, 0.5);
    std::uint64_t seed = 0;
    for (auto _ : state)
        benchmark::DoNotOptimize(fft_prefix_release(x, 1.0, 1.0, seed++));
}
BENCHMARK(BM_fft_prefix_release)->Arg(512)->Arg(2000)->Arg(4096);

static void BM_sens_brute(benchmark::State& state) {
    const int k = static_cast<int>(state.range(0));
    const int b = 16;
    const int n = k * b;
    Matrix c(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) c(i, j) = rng::keyed_gaussian(3, i, j);
    const auto schema = make_schema(n, k, b);
    for (auto _ : state)
        benchmark::DoNotOptimize(sens_brute(c, schema));
}
BENCHMARK(BM_sens_brute)->DenseRange(4, 16, 4);

static void BM_sens_nonneg_fastpath(benchmark::State& state) {
    const int k = static_cast<int>(state.range(0));
    const int b = 100;
    const int n = k * b;
    const Matrix gram = tree_gram(n);
    const auto schema = make_schema(n, k, b);
    for (auto _ : state) {
        double best = 0.0;
        for (const auto& pi : schema.patterns) {
            double total = 0.0;
            for (size_t a = 0; a < pi.size(); ++a)
                for (size_t b2 = 0; b2 < pi.size(); ++b2)
                    total += std::max(0.0, gram(pi[a], pi[b2]));
            best = std::max(best, total);
        }
        benchmark::DoNotOptimize(best);
    }
}
BENCHMARK(BM_sens_nonneg_fastpath)->Arg(5)->Arg(10)->Arg(20);

static void BM_psd_sqrt(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    Matrix m(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) m(i, j) = rng::keyed_gaussian(4, i, j);
    const Matrix psd = m * m.transpose();
    for (auto _ : state)
        benchmark::DoNotOptimize(psd_sqrt(psd));
}
BENCHMARK(BM_psd_sqrt)->Arg(64)->Arg(256);

static void BM_solve_prefix_full(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const Matrix a = prefix_workload(n);
    const auto schema = make_schema(n, 3, n / 3);
    for (auto _ : state) {
        auto res = solve(a, schema, ConstraintMode::full_corners, {1e-6, 50000});
        benchmark::DoNotOptimize(res.state.primal_value);
    }
}
BENCHMARK(BM_solve_prefix_full)->Arg(6)->Arg(12)->Arg(24)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
