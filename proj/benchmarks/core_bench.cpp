#include <benchmark/benchmark.h>

#include "blindhd/blindhd.hpp"

using namespace blindhd;

namespace {

Eigen::VectorXd random_field(int n, std::uint64_t seed) {
    Rng rng(seed);
    Eigen::VectorXd v(n);
    for (int i = 0; i < n; ++i) v(i) = rng.uniform(-2.0, 2.0);
    return v;
}

void BM_BuildNonstationary(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const Grid grid = Grid::uniform(0.0, 5.0, n);
    const Eigen::VectorXd field = random_field(n, 7);
    const MaternConfig cfg;
    for (auto _ : state)
        benchmark::DoNotOptimize(build_nonstationary(grid, field, cfg));
}

void BM_CholeskyWithJitter(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const Grid grid = Grid::uniform(0.0, 5.0, n);
    const Eigen::MatrixXd C =
        build_nonstationary(grid, random_field(n, 7), MaternConfig{});
    for (auto _ : state) benchmark::DoNotOptimize(cholesky_with_jitter(C));
}

void BM_BuildOperator(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const Grid grid = Grid::uniform(0.0, 5.0, n);
    for (auto _ : state)
        benchmark::DoNotOptimize(build_operator(grid, 0.25, true));
}

struct CellFixture {
    Dataset ds = simulate(SignalSpec::default_spec(), 300, 100, 0.25, 0.01, 1);
    Grid grid = ds.coarse_grid;
    double sigma = fit_sigma(ds);
    MaternConfig matern;
    PriorConfig prior;
    HyperParams hp;

    CellFixture() {
        hp.log_ell = random_field(grid.size(), 11) * 0.5;
        hp.log_tau = -1.5;
    }
};

void BM_MarginalLoglik(benchmark::State& state) {
    const CellFixture fx;
    for (auto _ : state)
        benchmark::DoNotOptimize(
            marginal_loglik(fx.ds.g, fx.hp, fx.grid, fx.sigma, fx.matern));
}

void BM_PosteriorGradientAnalytic(benchmark::State& state) {
    const CellFixture fx;
    for (auto _ : state)
        benchmark::DoNotOptimize(hyper_log_posterior_grad(
            fx.ds.g, fx.hp, fx.prior, fx.grid, fx.sigma, fx.matern));
}

void BM_PosteriorGradientFiniteDiff(benchmark::State& state) {
    const CellFixture fx;
    const Objective obj = [&fx](const Eigen::VectorXd& theta) {
        return hyper_log_posterior(fx.ds.g, HyperParams::unpack(theta),
                                   fx.prior, fx.grid, fx.sigma, fx.matern);
    };
    const Eigen::VectorXd theta = fx.hp.pack();
    for (auto _ : state)
        benchmark::DoNotOptimize(fd_gradient(obj, theta, 1e-5));
}

void BM_ConditionalPosterior(benchmark::State& state) {
    const CellFixture fx;
    for (auto _ : state)
        benchmark::DoNotOptimize(conditional_posterior(
            fx.ds.g, fx.hp, fx.grid, fx.sigma, fx.matern));
}

} // namespace

BENCHMARK(BM_BuildNonstationary)->Arg(50)->Arg(100)->Arg(200);
BENCHMARK(BM_CholeskyWithJitter)->Arg(50)->Arg(100)->Arg(200);
BENCHMARK(BM_BuildOperator)->Arg(100)->Arg(300);
BENCHMARK(BM_MarginalLoglik);
BENCHMARK(BM_PosteriorGradientAnalytic);
BENCHMARK(BM_PosteriorGradientFiniteDiff)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ConditionalPosterior);

BENCHMARK_MAIN();
