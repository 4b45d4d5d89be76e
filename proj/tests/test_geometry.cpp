#include <cmath>
#include <random>

#include <Eigen/Dense>

#include "doctest.h"

#include "balldiff/errors.hpp"
#include "balldiff/geometry.hpp"

using namespace balldiff;

namespace {

Eigen::VectorXd random_ball_point(std::mt19937_64& rng, int n) {
    std::normal_distribution<double> gauss;
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    Eigen::VectorXd v(n);
    for (int i = 0; i < n; ++i) v[i] = gauss(rng);
    v.normalize();
    // radius with uniform-in-ball law so boundary regions are exercised
    return v * std::pow(unif(rng), 1.0 / n);
}

}  // namespace

TEST_SUITE("geometry") {

TEST_CASE("sigma squares to the tangential projector") {
    std::mt19937_64 rng(11);
    for (int n : {1, 2, 3, 5}) {
        double worst = 0.0;
        for (int trial = 0; trial < 2000; ++trial) {
            const BallPoint x(random_ball_point(rng, n));
            const Eigen::MatrixXd s = sigma(x);
            const Eigen::MatrixXd target =
                Eigen::MatrixXd::Identity(n, n) -
                x.coords() * x.coords().transpose();
            worst = std::max(
                worst, (s * s.transpose() - target).cwiseAbs().maxCoeff());
            CHECK((s - s.transpose()).cwiseAbs().maxCoeff() < 1e-14);
        }
        CHECK(worst < 1e-12);
    }
}

TEST_CASE("sigma eigenvalues are 1 (tangent) and sqrt(1-r^2) (radial)") {
    std::mt19937_64 rng(13);
    for (int n : {2, 3, 5}) {
        for (int trial = 0; trial < 200; ++trial) {
            const BallPoint x(random_ball_point(rng, n));
            const double r2 = x.squared_norm();
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sigma(x));
            const Eigen::VectorXd ev = es.eigenvalues();
            CHECK(ev[0] == doctest::Approx(std::sqrt(1.0 - r2)).epsilon(1e-10));
            for (int i = 1; i < n; ++i)
                CHECK(ev[i] == doctest::Approx(1.0).epsilon(1e-10));
        }
    }
}

TEST_CASE("sigma at the origin is the identity") {
    const BallPoint zero(Eigen::VectorXd::Zero(3));
    CHECK((sigma(zero) - Eigen::MatrixXd::Identity(3, 3))
              .cwiseAbs()
              .maxCoeff() == 0.0);
}

TEST_CASE("apply_sigma agrees with the explicit matrix") {
    std::mt19937_64 rng(17);
    std::normal_distribution<double> gauss;
    for (int n : {1, 2, 4}) {
        for (int trial = 0; trial < 500; ++trial) {
            const BallPoint x(random_ball_point(rng, n));
            Eigen::VectorXd w(n), out(n);
            for (int i = 0; i < n; ++i) w[i] = gauss(rng);
            apply_sigma(x.coords(), x.squared_norm(), w, out);
            const Eigen::VectorXd ref = sigma(x) * w;
            CHECK((out - ref).cwiseAbs().maxCoeff() < 1e-13);
        }
    }
}

TEST_CASE("ball point construction and clamping") {
    Eigen::VectorXd v(2);
    v << 0.6, 0.8;  // exactly on the sphere
    CHECK(BallPoint(v).norm() == doctest::Approx(1.0).epsilon(1e-15));
    v << 0.6 * (1.0 + 5e-13), 0.8 * (1.0 + 5e-13);
    CHECK(BallPoint(v).norm() <= 1.0);  // pulled back
    v << 0.7, 0.8;
    CHECK_THROWS_AS(BallPoint{v}, DomainError);
    CHECK_THROWS_AS(BallPoint(Eigen::VectorXd()), DimensionError);
}

TEST_CASE("sphere point construction") {
    Eigen::VectorXd v(3);
    v << 0.0, 0.0, 1.0;
    CHECK(SpherePoint(v).dim() == 3);
    v << 0.5, 0.5, 0.5;
    CHECK_THROWS_AS(SpherePoint{v}, DomainError);
    CHECK(renormalize_sphere(v).coords().norm() ==
          doctest::Approx(1.0).epsilon(1e-15));
    CHECK_THROWS_AS(renormalize_sphere(Eigen::VectorXd::Zero(3)),
                    DomainError);
}

TEST_CASE("project_coords keeps the leading block") {
    Eigen::VectorXd v(4);
    v << 0.5, -0.5, 0.5, 0.5;
    const SpherePoint z(v);
    const BallPoint x = project_coords(z, 2);
    CHECK(x.dim() == 2);
    CHECK(x.coords()[0] == 0.5);
    CHECK(x.coords()[1] == -0.5);
    CHECK_THROWS_AS(project_coords(z, 0), DimensionError);
    CHECK_THROWS_AS(project_coords(z, 4), DimensionError);
}

TEST_CASE("invariant density normalization constants") {
    CHECK(invariant_density_constant({1, 2.0}) ==
          doctest::Approx(0.5).epsilon(1e-13));
    CHECK(invariant_density_constant({2, 2.0}) ==
          doctest::Approx(0.3183098861837907).epsilon(1e-13));
    CHECK(invariant_density_constant({2, 3.0}) ==
          doctest::Approx(0.477464829275686).epsilon(1e-13));
    CHECK(invariant_density_constant({3, 1.0}) ==
          doctest::Approx(0.10132118364233778).epsilon(1e-13));
}

TEST_CASE("invariant density point values") {
    Eigen::VectorXd v(2);
    v << 0.6, 0.0;
    CHECK(invariant_density_h(BallPoint(v), {2, 3.0}) ==
          doctest::Approx(0.38197186342054884).epsilon(1e-13));
    Eigen::VectorXd w(3);
    w << 0.3, 0.4, 0.5;
    CHECK(invariant_density_h(BallPoint(w), {3, 1.0}) ==
          doctest::Approx(0.14328979206268908).epsilon(1e-13));
    // ell = 2 is flat: h == constant for all interior points
    Eigen::VectorXd u(2);
    u << -0.1, 0.77;
    CHECK(invariant_density_h(BallPoint(u), {2, 2.0}) ==
          doctest::Approx(0.3183098861837907).epsilon(1e-13));
}

TEST_CASE("invariant density boundary behaviour in ell") {
    const DensityParams steep{2, 1.0};   // diverges at the sphere
    const DensityParams gentle{2, 3.0};  // vanishes at the sphere
    CHECK(std::isinf(invariant_density_h_r2(1.0, steep)));
    CHECK(invariant_density_h_r2(1.0, gentle) == 0.0);
    CHECK(invariant_density_h_r2(1.5, gentle) == 0.0);  // outside the ball
}

TEST_CASE("invariant density in r2 matches the point form") {
    Eigen::VectorXd v(3);
    v << 0.2, -0.3, 0.1;
    const DensityParams p{3, 2.5};
    CHECK(invariant_density_h_r2(v.squaredNorm(), p) ==
          doctest::Approx(invariant_density_h(BallPoint(v), p))
              .epsilon(1e-14));
}

TEST_CASE("density params validation") {
    CHECK_THROWS_AS(DensityParams(0, 1.0), DomainError);
    CHECK_THROWS_AS(DensityParams(2, 0.0), DomainError);
    CHECK_THROWS_AS(DensityParams(2, -1.0), DomainError);
}

}  // TEST_SUITE
