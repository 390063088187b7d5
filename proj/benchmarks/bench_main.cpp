#include <benchmark/benchmark.h>

#include <Eigen/Dense>

#include "momentsos/moment.hpp"
#include "momentsos/monomial.hpp"
#include "momentsos/relaxation.hpp"
#include "momentsos/sdp.hpp"

using namespace momentsos;

static void BM_Basis(benchmark::State &state) {
    const int n = static_cast<int>(state.range(0));
    const int m = static_cast<int>(state.range(1));
    for (auto _ : state) {
        benchmark::DoNotOptimize(basis(n, m));
    }
}
BENCHMARK(BM_Basis)->Args({4, 4})->Args({6, 6})->Args({8, 6});

static void BM_MomentLayout(benchmark::State &state) {
    const int n = static_cast<int>(state.range(0));
    const int d = static_cast<int>(state.range(1));
    for (auto _ : state) {
        benchmark::DoNotOptimize(moment_layout(n, d));
    }
}
BENCHMARK(BM_MomentLayout)->Args({3, 2})->Args({4, 3})->Args({6, 3});

static void BM_BuildMinCardRelaxation(benchmark::State &state) {
    const int n = static_cast<int>(state.range(0));
    const int N = static_cast<int>(state.range(1));
    Eigen::MatrixXd A(1 + n, n);
    A.setZero();
    A.row(0).setOnes();
    A.block(1, 0, n, n).setIdentity();
    Eigen::VectorXd b = Eigen::VectorXd::Zero(1 + n);
    b(0) = 0.5;
    SemialgebraicProgram sap = min_card_program(A, b, 2.0 * (1.0 + 2.0 * n));
    for (auto _ : state) {
        benchmark::DoNotOptimize(build_moment_relaxation(sap, N));
    }
}
BENCHMARK(BM_BuildMinCardRelaxation)->Args({2, 2})->Args({3, 2})->Args({2, 3});

static void BM_SolveSmallSdp(benchmark::State &state) {
    // MinCard on {x >= 0.5, 0 <= x <= 1} at the given order.
    const int N = static_cast<int>(state.range(0));
    Eigen::MatrixXd A(2, 1);
    A << 1.0, -1.0;
    Eigen::VectorXd b(2);
    b << 0.5, -1.0;
    SemialgebraicProgram sap = min_card_program(A, b, 6.0);
    RelaxationSdp rel = build_moment_relaxation(sap, N);
    for (auto _ : state) {
        benchmark::DoNotOptimize(solve(rel.sdp));
    }
}
BENCHMARK(BM_SolveSmallSdp)->Arg(1)->Arg(2)->Arg(3);

BENCHMARK_MAIN();
