// Serial reference vs OpenMP kernels.
#include <benchmark/benchmark.h>

#include <vector>

#include "lorentzfe/kernels.hpp"
#include "lorentzfe/norms.hpp"
#include "lorentzfe/random.hpp"

using namespace lorentzfe;

namespace {

kernels::TransferTable doubling_table(std::size_t cells) {
    kernels::TransferTable t;
    t.cells = cells;
    t.terms = 2;
    t.target.resize(2 * cells);
    t.weight.assign(2 * cells, 0.25);
    for (std::size_t i = 0; i < cells; ++i) {
        t.target[i] = (2 * i) % cells;
        t.target[cells + i] = (2 * i + 1) % cells;
    }
    return t;
}

template <Exec E>
void BM_transfer(benchmark::State& st) {
    const auto cells = static_cast<std::size_t>(st.range(0));
    const auto dim = static_cast<std::size_t>(st.range(1));
    const auto t = doubling_table(cells);
    std::vector<double> in(cells * dim, 1.0), out(cells * dim);
    for (auto _ : st) {
        kernels::transfer(E, t, in, dim, out);
        benchmark::DoNotOptimize(out.data());
    }
    st.SetItemsProcessed(st.iterations() * static_cast<std::int64_t>(cells));
}

template <Exec E>
void BM_row_norms(benchmark::State& st) {
    const auto rows = static_cast<std::size_t>(st.range(0));
    const std::size_t dim = 3;
    std::vector<double> in(rows * dim, 0.5), out(rows);
    for (auto _ : st) {
        E == Exec::parallel ? kernels::row_norms_parallel(in, dim, out) : kernels::row_norms_serial(in, dim, out);
        benchmark::DoNotOptimize(out.data());
    }
    st.SetItemsProcessed(st.iterations() * static_cast<std::int64_t>(rows));
}

template <Exec E>
void BM_lorentz_values(benchmark::State& st) {
    const auto g = make_grid(Domain::interval(0.0, 1.0), static_cast<std::size_t>(st.range(0)));
    const auto fs = random_corpus(g, 64, 7);
    const TauFn tau = derive_tau(make_power_young(2.0));
    for (auto _ : st) benchmark::DoNotOptimize(lorentz_values(fs, tau, Route::distribution, E));
}

}  // namespace

BENCHMARK(BM_transfer<Exec::serial>)->Args({1 << 16, 1})->Args({1 << 20, 1})->Args({1 << 16, 3});
BENCHMARK(BM_transfer<Exec::parallel>)->Args({1 << 16, 1})->Args({1 << 20, 1})->Args({1 << 16, 3});
BENCHMARK(BM_row_norms<Exec::serial>)->Arg(1 << 20);
BENCHMARK(BM_row_norms<Exec::parallel>)->Arg(1 << 20);
BENCHMARK(BM_lorentz_values<Exec::serial>)->Arg(4096);
BENCHMARK(BM_lorentz_values<Exec::parallel>)->Arg(4096);

BENCHMARK_MAIN();
