#include <benchmark/benchmark.h>
#include <omp.h>

#include "thetalift/theta.hpp"

using namespace thetalift;

namespace {

const ThetaKernel& kernel(long N) {
    static ThetaKernel k1(1, 3, 1, DirichletCharacter::principal(4));
    static ThetaKernel k4(4, 3, 1, DirichletCharacter::principal(16));
    return N == 1 ? k1 : k4;
}

const cplx z(0.13, 0.7), w(-0.21, 0.55);

void BM_eval_parallel(benchmark::State& st) {
    const auto& tk = kernel(st.range(0));
    omp_set_num_threads(int(st.range(1)));
    ThetaOptions o;
    for (auto _ : st) benchmark::DoNotOptimize(tk.eval(z, w, o));
    st.counters["threads"] = double(st.range(1));
}

void BM_eval_serial_reference(benchmark::State& st) {
    const auto& tk = kernel(st.range(0));
    ThetaOptions o;
    for (auto _ : st) benchmark::DoNotOptimize(tk.eval_serial_reference(z, w, o));
}

}  // namespace

BENCHMARK(BM_eval_serial_reference)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_eval_parallel)->ArgsProduct({{1, 4}, {1, 2, 4}})->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
