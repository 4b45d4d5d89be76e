// Acceptance gate: one line per criterion, PASS or FAIL, exit 0 only if every
// selected criterion passes.  Run with no arguments for the full gate or with
// a single index (1-11) for one criterion.  Statistical criteria run on
// pinned seeds; detail lines list the individual verdicts they aggregate.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "balldiff/experiments.hpp"
#include "balldiff/geometry.hpp"
#include "balldiff/noise.hpp"
#include "balldiff/processes.hpp"
#include "balldiff/stats.hpp"

using namespace balldiff;

namespace {

double seconds_since(const std::chrono::steady_clock::time_point& start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                         start)
        .count();
}

// Runs one experiment and prints its per-test verdict lines indented.
bool run_and_report(const ExperimentConfig& cfg) {
    const ExperimentOutput out = run_experiment(cfg);
    for (const TestReport& r : out.summary.reports) {
        std::printf("    %-32s %s  statistic=%.6g", r.name.c_str(),
                    r.pass ? "ok  " : "FAIL", r.statistic);
        if (std::isfinite(r.p_value)) std::printf("  p=%.4g", r.p_value);
        std::printf("\n");
    }
    return out.summary.overall_pass;
}

bool criterion_sigma_identity() {
    const auto start = std::chrono::steady_clock::now();
    std::mt19937_64 rng(2024);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    double worst = 0.0;
    for (int n : {1, 2, 3, 5}) {
        for (int trial = 0; trial < 100000; ++trial) {
            Eigen::VectorXd x(n);
            for (int i = 0; i < n; ++i) x[i] = gauss(rng);
            const double norm = x.norm();
            if (norm > 0.0)
                x *= std::pow(unif(rng), 1.0 / n) / norm;
            const BallPoint p(x);
            const Eigen::MatrixXd s = sigma(p);
            const Eigen::MatrixXd err =
                s * s.transpose() -
                (Eigen::MatrixXd::Identity(n, n) - x * x.transpose());
            worst = std::max(worst, err.cwiseAbs().maxCoeff());
        }
    }
    const double elapsed = seconds_since(start);
    std::printf("    worst entrywise error %.3g (budget 1e-12), %.2f s "
                "(budget 5 s)\n",
                worst, elapsed);
    return worst < 1e-12 && elapsed < 5.0;
}

bool criterion_stationary_laws() {
    const auto start = std::chrono::steady_clock::now();
    ExperimentConfig arch = default_config("archimedes");
    arch.seed = 7;
    bool pass = run_and_report(arch);
    ExperimentConfig dens = default_config("invariant-density");
    dens.seed = 1;
    pass = run_and_report(dens) && pass;
    const double elapsed = seconds_since(start);
    std::printf("    %.2f s (budget 120 s)\n", elapsed);
    return pass && elapsed < 120.0;
}

bool criterion_squared_radius_law() {
    const auto start = std::chrono::steady_clock::now();
    ExperimentConfig cfg = default_config("wf-radial");
    cfg.seed = 1;
    const bool pass = run_and_report(cfg);
    const double elapsed = seconds_since(start);
    std::printf("    %.2f s (budget 300 s)\n", elapsed);
    return pass && elapsed < 300.0;
}

bool criterion_quadratic_covariation() {
    const Coefficients c =
        make_coefficients(2, "linear:1,0.2", "const:1.5");
    const ProjectedStepper stepper(c);
    Eigen::VectorXd x0(2);
    x0 << 0.5, 0.0;
    const double dt = 1e-4;
    const double budget = 5.0 * std::sqrt(dt);
    double worst = 0.0;
    for (std::int64_t pid = 0; pid < 50; ++pid) {
        NoiseDriver driver(1, pid, 2, dt);
        const PathGrid x = simulate_path(stepper, x0, 1.0, dt, driver);
        Eigen::Matrix2d realized = Eigen::Matrix2d::Zero();
        Eigen::Matrix2d predicted = Eigen::Matrix2d::Zero();
        auto local = [&](std::size_t k) -> Eigen::Matrix2d {
            const Eigen::Vector2d xv = x.state(k);
            const double g2 = std::pow(c.gamma(xv.norm()), 2);
            return g2 * (Eigen::Matrix2d::Identity() - xv * xv.transpose());
        };
        Eigen::Matrix2d prev = local(0);
        for (std::size_t k = 0; k + 1 < x.size(); ++k) {
            const Eigen::Vector2d dx = x.state(k + 1) - x.state(k);
            realized += dx * dx.transpose();
            const Eigen::Matrix2d cur = local(k + 1);
            predicted += 0.5 * dt * (prev + cur);
            prev = cur;
        }
        worst = std::max(
            worst, (realized - predicted).norm() / predicted.norm());
    }
    std::printf("    worst relative covariation error %.4f (budget %.4f)\n",
                worst, budget);
    return worst < budget;
}

bool criterion_quotient_law() {
    ExperimentConfig cfg = default_config("warren-yor");
    cfg.seed = 1;
    return run_and_report(cfg);
}

bool criterion_boundary_lower() {
    ExperimentConfig below = default_config("boundary");
    below.seed = 2;
    std::puts("    lower boundary, default drift:");
    bool pass = run_and_report(below);

    ExperimentConfig above = default_config("boundary");
    above.direction = "above";
    above.g_spec = "const:2.5";
    above.seed = 2;
    std::puts("    upper boundary, g = 2.5:");
    pass = run_and_report(above) && pass;
    return pass;
}

bool criterion_sandwich() {
    const Coefficients c =
        make_coefficients(2, "linear:1,0.005", "linear:2,0.005");
    const double hi = c.drift_ratio_max();
    const double lo = c.drift_ratio_min();
    const double n = 2.0;
    const WfParams upper_drift{n, lo};   // smaller down-drift: upper path
    const WfParams lower_drift{n, hi};   // larger down-drift: lower path
    const WfParams exact{
        0.0, 0.0, [&c, n](double u) {
            const double gt = c.gamma_tilde(u);
            const double ratio = 2.0 * c.g_tilde(u) / (gt * gt) - (n - 1.0);
            return n * (1.0 - u) - ratio * u;
        }};
    const double dt = 1e-3;
    const std::size_t steps = 1000;
    double worst_violation = 0.0;
    for (std::int64_t pid = 0; pid < 100; ++pid) {
        NoiseDriver driver(1, pid, 1, dt);
        double u = 0.3, w_lower = 0.3, w_upper = 0.3;
        for (std::size_t k = 0; k < steps; ++k) {
            const double db =
                driver.gaussian_increment(static_cast<std::int64_t>(k), 0);
            u = step_wf(u, db, dt, exact);
            w_lower = step_wf(w_lower, db, dt, lower_drift);
            w_upper = step_wf(w_upper, db, dt, upper_drift);
            worst_violation = std::max(
                {worst_violation, w_lower - 2.0 * dt - u,
                 u - (w_upper + 2.0 * dt)});
        }
    }
    std::printf("    worst sandwich violation %.3g (must be <= 0); drift "
                "ratio range [%.4f, %.4f]\n",
                worst_violation, lo, hi);
    return worst_violation <= 0.0;
}

bool criterion_skew_product() {
    ExperimentConfig cfg = default_config("skew");
    cfg.seed = 1;
    return run_and_report(cfg);
}

bool criterion_rapid_spinning() {
    ExperimentConfig cfg = default_config("spin");
    cfg.seed = 1;
    return run_and_report(cfg);
}

bool criterion_shared_noise_coalescence() {
    ExperimentConfig cfg = default_config("uniqueness");
    cfg.seed = 1;
    return run_and_report(cfg);
}

bool criterion_drift_threshold() {
    ExperimentConfig cfg = default_config("boundary");
    cfg.process = "wf";
    cfg.x0 = {0.1};
    cfg.dt = 1e-4;
    cfg.beta = 2.0;
    cfg.seed = 2;
    return run_and_report(cfg);
}

struct Criterion {
    int id;
    const char* label;
    std::function<bool()> run;
};

const std::vector<Criterion>& criteria() {
    static const std::vector<Criterion> all = {
        {1, "volatility factorization identity", criterion_sigma_identity},
        {2, "stationary coordinate and invariant density laws",
         criterion_stationary_laws},
        {3, "squared-radius law equivalence", criterion_squared_radius_law},
        {4, "realized quadratic covariation", criterion_quadratic_covariation},
        {5, "squared-Bessel quotient law", criterion_quotient_law},
        {6, "boundary non-attainment trends", criterion_boundary_lower},
        {7, "drift comparison sandwich", criterion_sandwich},
        {8, "skew reconstruction and independence", criterion_skew_product},
        {9, "rapid spinning uniformity", criterion_rapid_spinning},
        {10, "shared-noise coalescence trend",
         criterion_shared_noise_coalescence},
        {11, "drift threshold crossing drop", criterion_drift_threshold},
    };
    return all;
}

}  // namespace

int main(int argc, char** argv) {
    int only = 0;
    if (argc > 1) {
        only = std::atoi(argv[1]);
        if (only < 1 || only > static_cast<int>(criteria().size())) {
            std::fprintf(stderr, "usage: %s [1-%zu]\n", argv[0],
                         criteria().size());
            return 2;
        }
    }
    bool all_pass = true;
    for (const Criterion& c : criteria()) {
        if (only != 0 && c.id != only) continue;
        bool pass = false;
        try {
            pass = c.run();
        } catch (const std::exception& e) {
            std::printf("    exception: %s\n", e.what());
            pass = false;
        }
        std::printf("criterion %2d %s  %s\n", c.id, pass ? "PASS" : "FAIL",
                    c.label);
        all_pass = all_pass && pass;
    }
    return all_pass ? 0 : 1;
}
