#pragma once

// Points of the closed unit ball and the unit sphere, the volatility matrix
// σ(x) of the projected diffusion, and the invariant density
// h(x) = Γ((n+ℓ)/2) / (π^{n/2} Γ(ℓ/2)) · (1-|x|²)^{(ℓ-2)/2}.

#include <Eigen/Dense>

#include "balldiff/errors.hpp"

namespace balldiff {

// Tolerance for norm checks on constructed points.
inline constexpr double kBallEps = 1e-12;

// A point of the closed unit ball in R^n. Norms in (1, 1+kBallEps] are
// radially pulled back to the sphere; anything larger is rejected.
class BallPoint {
 public:
  explicit BallPoint(Eigen::VectorXd coords);

  const Eigen::VectorXd& coords() const { return v_; }
  int dim() const { return static_cast<int>(v_.size()); }
  double squared_norm() const { return v_.squaredNorm(); }
  double norm() const { return v_.norm(); }

 private:
  Eigen::VectorXd v_;
};

// A point of the unit sphere S^{d-1}; the constructor renormalizes and
// rejects vectors whose norm is off by more than kBallEps. Use
// renormalize_sphere to project an arbitrary nonzero vector.
class SpherePoint {
 public:
  explicit SpherePoint(Eigen::VectorXd coords);

  const Eigen::VectorXd& coords() const { return v_; }
  int dim() const { return static_cast<int>(v_.size()); }

 private:
  friend SpherePoint renormalize_sphere(Eigen::VectorXd v);
  struct Renormalized {};
  SpherePoint(Eigen::VectorXd coords, Renormalized) : v_(std::move(coords)) {}
  Eigen::VectorXd v_;
};

// Parameters of the invariant density: ambient dimension n >= 1 and the
// codimension weight ell > 0 (the sphere dimension is d = n + ell when ell
// is an integer).
struct DensityParams {
  int n;
  double ell;

  DensityParams(int n_, double ell_);
};

// Volatility matrix of the projected diffusion:
// σ(x) = I - (1 - sqrt(1-|x|²)) x xᵀ / |x|², with σ(0) = I. It is the unique
// nonnegative-definite square root of I - x xᵀ.
Eigen::MatrixXd sigma(const BallPoint& x);

// σ(x)·w without forming the matrix: w - (1-sqrt(1-r²)) (x·w) x / r².
// r2 must equal |x|²; used in the simulation hot loop.
void apply_sigma(const Eigen::VectorXd& x, double r2, const Eigen::VectorXd& w,
                 Eigen::VectorXd& out);

// First n coordinates of a sphere point; requires 1 <= n < d.
BallPoint project_coords(const SpherePoint& z, int n);

// Invariant density h of the projected process. Returns +inf at |x| = 1 when
// ell < 2 (the density diverges at the boundary) and 0 there when ell > 2.
double invariant_density_h(const BallPoint& x, const DensityParams& p);

// Same density as a function of the squared radius; r2 > 1 gives 0. This is
// the form used by radial histogram tests.
double invariant_density_h_r2(double r2, const DensityParams& p);

// Normalization constant Γ((n+ℓ)/2) / (π^{n/2} Γ(ℓ/2)).
double invariant_density_constant(const DensityParams& p);

// Projects a nonzero vector to the sphere; zero vector → DomainError.
SpherePoint renormalize_sphere(Eigen::VectorXd v);

}  // namespace balldiff
