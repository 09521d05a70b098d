#include <benchmark/benchmark.h>

#include "fakemu/bias.hpp"
#include "fakemu/quadrature.hpp"
#include "fakemu/sieve.hpp"

using namespace fakemu;

namespace {

const EpsilonSpec& fig53() {
    static const EpsilonSpec s = parse_eps_spec("periodic:m=2:[i,-i]");
    return s;
}

void BM_SieveBlock(benchmark::State& st) {
    const std::uint64_t n = static_cast<std::uint64_t>(st.range(0));
    MultiplicativeSieve sv(fig53(), n);
    for (auto _ : st) {
        cplx acc(0.0, 0.0);
        sv.for_each_block(1, n, [&](std::uint64_t, std::span<const cplx> v) {
            for (cplx c : v) acc += c;
        });
        benchmark::DoNotOptimize(acc);
    }
    st.SetItemsProcessed(st.iterations() * st.range(0));
}
BENCHMARK(BM_SieveBlock)->Arg(1 << 20)->Arg(1 << 24);

void BM_DirectExpSum(benchmark::State& st) {
    const double x = static_cast<double>(st.range(0));
    for (auto _ : st) benchmark::DoNotOptimize(direct_exp_sum(fig53(), x));
}
BENCHMARK(BM_DirectExpSum)->Arg(10000)->Arg(100000)->Unit(benchmark::kMillisecond);

void BM_Zeta(benchmark::State& st) {
    const double t = static_cast<double>(st.range(0));
    cplx s(0.5, t);
    for (auto _ : st) {
        benchmark::DoNotOptimize(zeta(s));
        s += cplx(0.0, 1e-9);
    }
}
BENCHMARK(BM_Zeta)->Arg(10)->Arg(100)->Arg(500);

void BM_Gamma(benchmark::State& st) {
    cplx s(0.3, 14.0);
    for (auto _ : st) {
        benchmark::DoNotOptimize(gamma(s));
        s += cplx(0.0, 1e-9);
    }
}
BENCHMARK(BM_Gamma);

void BM_ResidualProduct(benchmark::State& st) {
    ResidualProduct G(fig53(), GfConfig(static_cast<std::uint64_t>(st.range(0))));
    cplx s(0.5, 14.0);
    for (auto _ : st) {
        benchmark::DoNotOptimize(G(s));
        s += cplx(0.0, 1e-9);
    }
}
BENCHMARK(BM_ResidualProduct)->Arg(10000)->Arg(100000)->Unit(benchmark::kMicrosecond);

void BM_LaplaceQuadrature(benchmark::State& st) {
    for (auto _ : st) {
        LaplaceIntegral I(0.5, cplx(-0.3, 0.2), cplx(-0.4, 0.1), 2.0,
                          [](double u) { return std::exp(cplx(-u, 3 * u)) / (1.0 + u); });
        benchmark::DoNotOptimize(I(std::log(1e4)));
    }
}
BENCHMARK(BM_LaplaceQuadrature)->Unit(benchmark::kMicrosecond);

void BM_ZeroSum(benchmark::State& st) {
    FormulaConfig cfg;
    cfg.n_zeros = static_cast<int>(st.range(0));
    for (auto _ : st) {
        ExplicitFormula F(fig53(), cfg);
        benchmark::DoNotOptimize(F.zero_sum(1e4).value);
    }
}
BENCHMARK(BM_ZeroSum)->Arg(5)->Unit(benchmark::kMillisecond)->Iterations(2);

}  // namespace

BENCHMARK_MAIN();
