#include <benchmark/benchmark.h>

#include <Eigen/Dense>

#include "balldiff/geometry.hpp"
#include "balldiff/noise.hpp"
#include "balldiff/processes.hpp"
#include "balldiff/stats.hpp"

using namespace balldiff;

namespace {

Coefficients bench_coeffs(int n) {
    return Coefficients(
        n, [](double) { return 1.0; },
        [n](double) { return 0.5 * (n + 1); }, 0.0, 0.0, 1.0);
}

void BM_uniform_draws(benchmark::State& state) {
    NoiseDriver driver(1, 0, 4, 1e-3);
    std::int64_t step = 0;
    for (auto _ : state) {
        double acc = 0.0;
        for (int c = 0; c < 4; ++c) acc += driver.uniform01(step, c);
        benchmark::DoNotOptimize(acc);
        ++step;
    }
    state.SetItemsProcessed(state.iterations() * 4);
}
BENCHMARK(BM_uniform_draws);

void BM_gaussian_increments(benchmark::State& state) {
    NoiseDriver driver(1, 0, 4, 1e-3);
    Eigen::VectorXd dw(4);
    std::int64_t step = 0;
    for (auto _ : state) {
        driver.fill_increments(step, {dw.data(), 4});
        benchmark::DoNotOptimize(dw.data());
        ++step;
    }
    state.SetItemsProcessed(state.iterations() * 4);
}
BENCHMARK(BM_gaussian_increments);

void BM_sigma_apply(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    Eigen::VectorXd x = Eigen::VectorXd::Constant(n, 0.5 / std::sqrt(n));
    Eigen::VectorXd w = Eigen::VectorXd::Constant(n, 0.1);
    Eigen::VectorXd out(n);
    const double r2 = x.squaredNorm();
    for (auto _ : state) {
        apply_sigma(x, r2, w, out);
        benchmark::DoNotOptimize(out.data());
    }
}
BENCHMARK(BM_sigma_apply)->Arg(2)->Arg(5)->Arg(16);

void BM_projected_steps(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const Coefficients c = bench_coeffs(n);
    const ProjectedStepper stepper(c);
    NoiseDriver driver(1, 0, n, 1e-3);
    Eigen::VectorXd x = Eigen::VectorXd::Zero(n), out(n), dw(n);
    std::int64_t step = 0;
    for (auto _ : state) {
        driver.fill_increments(step, {dw.data(), static_cast<std::size_t>(n)});
        stepper.step(x, dw, 1e-3, out);
        x.swap(out);
        ++step;
        benchmark::DoNotOptimize(x.data());
    }
    state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_projected_steps)->Arg(2)->Arg(3)->Arg(5);

void BM_wf_steps(benchmark::State& state) {
    const WfParams params{2.0, 3.0};
    NoiseDriver driver(1, 0, 1, 1e-3);
    double u = 0.5;
    std::int64_t step = 0;
    for (auto _ : state) {
        u = step_wf(u, driver.gaussian_increment(step, 0), 1e-3, params);
        ++step;
        benchmark::DoNotOptimize(u);
    }
    state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_wf_steps);

void BM_ks_one_sample(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    NoiseDriver driver(5, 0, 1, 1.0);
    std::vector<double> sample(n);
    for (std::size_t i = 0; i < n; ++i)
        sample[i] = driver.uniform01(static_cast<std::int64_t>(i), 0);
    const auto cdf = [](double x) { return x < 0 ? 0.0 : (x > 1 ? 1.0 : x); };
    for (auto _ : state) {
        const TestReport r = ks_one_sample(sample, cdf);
        benchmark::DoNotOptimize(r.p_value);
    }
}
BENCHMARK(BM_ks_one_sample)->Arg(1000)->Arg(10000);

}  // namespace

BENCHMARK_MAIN();
