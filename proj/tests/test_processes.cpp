#include <cmath>
#include <vector>

#include <Eigen/Dense>

#include "doctest.h"

#include "balldiff/errors.hpp"
#include "balldiff/noise.hpp"
#include "balldiff/processes.hpp"

using namespace balldiff;

static_assert(VectorStepper<SphericalBmStepper>);
static_assert(VectorStepper<ProjectedStepper>);
static_assert(ScalarStepper<WfStepper>);
static_assert(ScalarStepper<BesqStepper>);
static_assert(ScalarStepper<RadialStepper>);
static_assert(ScalarStepper<UStepper>);

namespace {

Coefficients unit_coeffs(int n, double g_value) {
    return Coefficients(
        n, [](double) { return 1.0; },
        [g_value](double) { return g_value; }, 0.0, 0.0, 1.0);
}

}  // namespace

TEST_SUITE("processes") {

TEST_CASE("coefficients expose the declared data and envelope") {
    const Coefficients c(
        2, [](double r) { return 1.0 + 0.5 * r; },
        [](double r) { return 2.0 + r; }, 0.5, 1.0, 1.0);
    CHECK(c.n() == 2);
    CHECK(c.gamma(0.5) == 1.25);
    CHECK(c.g(0.5) == 2.5);
    CHECK(c.gamma_tilde(0.25) == 1.25);  // gamma at sqrt(u)
    CHECK(c.g_tilde(0.25) == 2.5);
    CHECK(c.gamma_lipschitz() == 0.5);
    CHECK(c.g_lipschitz() == 1.0);
    CHECK(c.gamma_min() == 1.0);
    // ratio(u) = 2 g(sqrt(u))/gamma(sqrt(u))^2 - 1: decreasing here, extremes
    // at u = 0 (ratio 3) and u = 1 (ratio 6/2.25 - 1)
    CHECK(c.drift_ratio_max() == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(c.drift_ratio_min() ==
          doctest::Approx(6.0 / 2.25 - 1.0).epsilon(1e-9));
    CHECK(c.admissibility_margin() ==
          doctest::Approx(3.0 / 2.25 - 0.5).epsilon(1e-12));
}

TEST_CASE("coefficients validation") {
    auto one = [](double) { return 1.0; };
    CHECK_THROWS_AS(Coefficients(0, one, one, 0, 0, 1.0), ConfigError);
    CHECK_THROWS_AS(Coefficients(2, one, one, 0, 0, 0.0), ConfigError);
    // declared Lipschitz bound violated by the actual slope
    CHECK_THROWS_AS(Coefficients(
                        2, [](double r) { return 1.0 + 2.0 * r; }, one, 0.5,
                        0.0, 1.0),
                    ConfigError);
    // gamma dips below its declared minimum
    CHECK_THROWS_AS(Coefficients(
                        2, [](double r) { return 1.0 - 0.5 * r; }, one, 0.5,
                        0.0, 0.9),
                    ConfigError);
    // admissibility: n = 3 needs g(1)/gamma(1)^2 >= 1
    CHECK_THROWS_AS(unit_coeffs(3, 0.9), ConfigError);
    CHECK_NOTHROW(unit_coeffs(3, 1.0));
}

TEST_CASE("single Euler steps match hand-computed values") {
    // WF: u' = u + 2 sqrt(u(1-u)) db + (a(1-u) - b u) dt
    CHECK(step_wf(0.5, 0.1, 0.01, WfParams{2.0, 3.0}) ==
          doctest::Approx(0.595).epsilon(1e-15));
    // clamps to [0,1]
    CHECK(step_wf(0.9, 5.0, 0.01, WfParams{1.0, 1.0}) == 1.0);
    CHECK(step_wf(0.1, -5.0, 0.01, WfParams{1.0, 1.0}) == 0.0);
    // drift override replaces a(1-u) - bu entirely
    const WfParams od{1.0, 1.0, [](double) { return -7.0; }};
    CHECK(step_wf(0.5, 0.0, 0.01, od) ==
          doctest::Approx(0.5 - 0.07).epsilon(1e-15));

    // BESQ: v' = v + 2 sqrt(v) db + delta dt, clamped at 0
    CHECK(step_besq(1.0, 0.1, 0.01, 2.0) ==
          doctest::Approx(1.22).epsilon(1e-15));
    CHECK(step_besq(0.01, -1.0, 0.01, 2.0) == 0.0);

    // radial: diffusion gamma sqrt(1-r^2), drift ((n-1)gamma^2 - 2 g r^2)/(2r)
    const Coefficients c = unit_coeffs(2, 2.0);
    const double r = 0.5;
    const double want =
        r + std::sqrt(0.75) * 0.1 +
        ((1.0 - 2.0 * 2.0 * 0.25) / (2.0 * 0.5)) * 0.01;
    CHECK(step_radial(r, 0.1, 0.01, c) == doctest::Approx(want).epsilon(1e-14));
    CHECK_THROWS_AS(step_radial(1e-9, 0.0, 0.01, c), SingularityError);
}

TEST_CASE("squared-radius step equals Wright-Fisher for constant coefficients") {
    // gamma == 1, g == (n-1+ell)/2 turns the U equation into WF(n, ell)
    const int n = 2;
    const double ell = 3.0;
    const Coefficients c = unit_coeffs(n, 0.5 * (n - 1 + ell));
    const WfParams wf{static_cast<double>(n), ell};
    for (double u : {0.0, 0.05, 0.3, 0.5, 0.77, 0.95, 1.0}) {
        for (double db : {-0.2, -0.01, 0.0, 0.04, 0.3}) {
            CHECK(step_u(u, db, 1e-3, c) ==
                  doctest::Approx(step_wf(u, db, 1e-3, wf)).epsilon(1e-14));
        }
    }
}

TEST_CASE("projected step stays in the closed ball") {
    const Coefficients c = unit_coeffs(2, 1.5);
    NoiseDriver driver(3, 0, 2, 1e-2);
    Eigen::VectorXd x(2);
    x << 0.9, 0.4;  // |x| close to 1
    x *= 0.99 / x.norm();
    BallPoint p(x);
    for (int k = 0; k < 500; ++k) {
        Eigen::VectorXd dw(2);
        dw << driver.gaussian_increment(k, 0), driver.gaussian_increment(k, 1);
        p = step_projected(p, dw, 1e-2, c);
        CHECK(p.norm() <= 1.0 + 1e-15);
    }
}

TEST_CASE("spherical step stays on the sphere") {
    SphericalBmStepper stepper(3);
    NoiseDriver driver(5, 0, 3, 1e-2);
    Eigen::VectorXd z(3), out(3), dw(3);
    z << 1.0, 0.0, 0.0;
    for (int k = 0; k < 500; ++k) {
        for (int i = 0; i < 3; ++i) dw[i] = driver.gaussian_increment(k, i);
        stepper.step(z, dw, 1e-2, out);
        z = out;
        CHECK(std::fabs(z.norm() - 1.0) < 1e-14);
    }
}

TEST_CASE("path grid basics") {
    PathGrid p(2, 5, 0.0, 0.1, 7, 3);
    CHECK(p.dim() == 2);
    CHECK(p.size() == 5);
    CHECK(p.seed() == 7);
    CHECK(p.path_id() == 3);
    CHECK(p.alive_until() == 4);  // fresh grid is fully alive
    CHECK(p.time(3) == doctest::Approx(0.3).epsilon(1e-15));
    p.state(2) << 1.0, -2.0;
    CHECK(p.state(2)[1] == -2.0);
    p.set_alive_until(1);
    CHECK(p.alive_until() == 1);
    CHECK_THROWS_AS(p.set_alive_until(5), RangeError);
    CHECK_THROWS_AS(PathGrid(0, 5, 0.0, 0.1, 0, 0), DimensionError);
    CHECK_THROWS_AS(PathGrid(1, 0, 0.0, 0.1, 0, 0), DomainError);
    CHECK_THROWS_AS(PathGrid(1, 5, 0.0, 0.0, 0, 0), DomainError);
}

TEST_CASE("step_count rounds up with a drift guard") {
    CHECK(step_count(1.0, 1e-3) == 1000);
    CHECK(step_count(0.1, 0.03) == 4);
    // 0.1/0.001 can land at 100.00000000000001 in floating point
    CHECK(step_count(0.1, 0.001) == 100);
    CHECK_THROWS_AS(step_count(0.0, 0.1), DomainError);
    CHECK_THROWS_AS(step_count(1.0, 0.0), DomainError);
}

TEST_CASE("simulate_path vector contract") {
    const Coefficients c = unit_coeffs(2, 1.5);
    const ProjectedStepper stepper(c);
    const Eigen::VectorXd x0 = Eigen::VectorXd::Zero(2);
    NoiseDriver driver(11, 4, 2, 1e-3);
    const PathGrid path = simulate_path(stepper, x0, 0.05, 1e-3, driver);
    CHECK(path.size() == 51);
    CHECK(path.dim() == 2);
    CHECK(path.seed() == 11);
    CHECK(path.path_id() == 4);
    CHECK(path.state(0).norm() == 0.0);
    CHECK(path.alive_until() == 50);

    // bitwise determinism
    NoiseDriver again(11, 4, 2, 1e-3);
    const PathGrid path2 = simulate_path(stepper, x0, 0.05, 1e-3, again);
    CHECK(path.data() == path2.data());

    // driver dt mismatch is a configuration error
    NoiseDriver wrong(11, 4, 2, 2e-3);
    CHECK_THROWS_AS(simulate_path(stepper, x0, 0.05, 1e-3, wrong),
                    ConfigError);
    // dimension mismatch
    CHECK_THROWS_AS(
        simulate_path(stepper, Eigen::VectorXd::Zero(3), 0.05, 1e-3, driver),
        DimensionError);
}

TEST_CASE("killed scalar paths freeze the death state") {
    // WF with beta < 0 drifts to 1 and dies there
    const WfStepper stepper(WfParams{1.0, -1.0});
    NoiseDriver driver(1, 0, 1, 1e-2);
    const PathGrid path = simulate_path(stepper, 0.9, 1.0, 1e-2, driver);
    REQUIRE(path.size() == 101);
    CHECK(path.alive_until() < 100);  // died before the horizon
    const std::size_t k = path.alive_until();
    CHECK(path.value(k) == 1.0);
    for (std::size_t j = k; j <= 100; ++j) CHECK(path.value(j) == 1.0);
}

TEST_CASE("radial underflow surfaces as an indexed singularity") {
    // n = 1 removes the repulsive 1/r drift so the radius can reach the floor
    const Coefficients c = unit_coeffs(1, 5.0);
    const RadialStepper stepper(c);
    NoiseDriver driver(2, 0, 1, 1e-2);
    try {
        const PathGrid path = simulate_path(stepper, 0.05, 50.0, 1e-2, driver);
        FAIL("expected SingularityError, path survived to "
             << path.value(path.size() - 1));
    } catch (const SingularityError& e) {
        CHECK(e.index() >= 1);
        CHECK(std::string(e.what()).find("at step") != std::string::npos);
    }
    CHECK_THROWS_AS(stepper.validate_initial(1e-9), DomainError);
}

TEST_CASE("squared_radius maps states pointwise") {
    PathGrid p(2, 3, 0.0, 0.5, 9, 1);
    p.state(0) << 0.3, 0.4;
    p.state(1) << 0.6, 0.8;
    p.state(2) << 0.0, 0.0;
    p.set_alive_until(1);
    const PathGrid u = squared_radius(p);
    CHECK(u.dim() == 1);
    CHECK(u.alive_until() == 1);
    CHECK(u.value(0) == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(u.value(1) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(u.dt() == 0.5);
}

TEST_CASE("initial state validation per stepper") {
    CHECK_THROWS_AS(WfStepper(WfParams{1.0, 1.0}).validate_initial(1.5),
                    DomainError);
    CHECK_THROWS_AS(BesqStepper(2.0).validate_initial(-0.1), DomainError);
    CHECK_THROWS_AS(UStepper(unit_coeffs(2, 1.5)).validate_initial(-0.1),
                    DomainError);
    Eigen::VectorXd big(2);
    big << 1.2, 0.0;
    CHECK_THROWS_AS(ProjectedStepper(unit_coeffs(2, 1.5)).validate_initial(big),
                    DomainError);
    CHECK_THROWS_AS(SphericalBmStepper(3).validate_initial(
                        Eigen::VectorXd::Zero(3)),
                    DomainError);
    CHECK_THROWS_AS(SphericalBmStepper(1), DimensionError);
    CHECK_THROWS_AS(WfParams(-1.0, 2.0), DomainError);
}

}  // TEST_SUITE
