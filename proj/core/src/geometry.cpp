#include "balldiff/geometry.hpp"

#include <cmath>
#include <limits>

#include "balldiff/special_functions.hpp"

namespace balldiff {

BallPoint::BallPoint(Eigen::VectorXd coords) : v_(std::move(coords)) {
  if (v_.size() == 0) throw DimensionError("BallPoint: empty coordinate vector");
  const double r = v_.norm();
  if (r > 1.0 + kBallEps)
    throw DomainError("BallPoint: norm " + std::to_string(r) +
                      " exceeds 1 beyond tolerance");
  if (r > 1.0) v_ /= r;
}

SpherePoint::SpherePoint(Eigen::VectorXd coords) : v_(std::move(coords)) {
  if (v_.size() == 0) throw DimensionError("SpherePoint: empty coordinate vector");
  const double r = v_.norm();
  if (std::fabs(r - 1.0) > kBallEps)
    throw DomainError("SpherePoint: vector is not unit length");
  v_ /= r;
}

DensityParams::DensityParams(int n_, double ell_) : n(n_), ell(ell_) {
  if (n < 1) throw DomainError("DensityParams: n must be >= 1");
  if (!(ell > 0.0)) throw DomainError("DensityParams: ell must be positive");
}

Eigen::MatrixXd sigma(const BallPoint& x) {
  const int n = x.dim();
  const double r2 = x.squared_norm();
  Eigen::MatrixXd m = Eigen::MatrixXd::Identity(n, n);
  if (r2 == 0.0) return m;
  const double c = 1.0 - std::sqrt(std::max(1.0 - r2, 0.0));
  m.noalias() -= (c / r2) * (x.coords() * x.coords().transpose());
  return m;
}

void apply_sigma(const Eigen::VectorXd& x, double r2, const Eigen::VectorXd& w,
                 Eigen::VectorXd& out) {
  if (r2 <= 0.0) {
    out = w;
    return;
  }
  const double c = 1.0 - std::sqrt(std::max(1.0 - r2, 0.0));
  out = w - (c * x.dot(w) / r2) * x;
}

BallPoint project_coords(const SpherePoint& z, int n) {
  if (n < 1 || n >= z.dim())
    throw DimensionError("project_coords: need 1 <= n < dim(z)");
  return BallPoint(z.coords().head(n));
}

double invariant_density_constant(const DensityParams& p) {
  return std::exp(log_gamma(0.5 * (p.n + p.ell)) - log_gamma(0.5 * p.ell) -
                  0.5 * p.n * std::log(M_PI));
}

double invariant_density_h_r2(double r2, const DensityParams& p) {
  if (r2 > 1.0) return 0.0;
  const double c = invariant_density_constant(p);
  const double e = 0.5 * (p.ell - 2.0);
  if (r2 >= 1.0) {
    if (e < 0.0) return std::numeric_limits<double>::infinity();
    if (e == 0.0) return c;
    return 0.0;
  }
  return c * std::pow(1.0 - r2, e);
}

double invariant_density_h(const BallPoint& x, const DensityParams& p) {
  return invariant_density_h_r2(x.squared_norm(), p);
}

SpherePoint renormalize_sphere(Eigen::VectorXd v) {
  const double r = v.norm();
  if (r == 0.0 || !std::isfinite(r))
    throw DomainError("renormalize_sphere: cannot project the zero vector");
  v /= r;
  return SpherePoint(std::move(v), SpherePoint::Renormalized{});
}

}  // namespace balldiff
