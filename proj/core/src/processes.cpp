#include "balldiff/processes.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace balldiff {

namespace {

constexpr double kGridStep = 1e-3;

double clamp01(double u) { return std::clamp(u, 0.0, 1.0); }

}  // namespace

Coefficients::Coefficients(int n, std::function<double(double)> gamma,
                           std::function<double(double)> g, double gamma_lipschitz,
                           double g_lipschitz, double gamma_min)
    : n_(n),
      gamma_(std::move(gamma)),
      g_(std::move(g)),
      l_gamma_(gamma_lipschitz),
      l_g_(g_lipschitz),
      gamma_min_(gamma_min) {
  if (n_ < 1) throw ConfigError("Coefficients: n must be >= 1");
  if (!gamma_ || !g_) throw ConfigError("Coefficients: gamma and g must be callable");
  if (!(l_gamma_ >= 0.0) || !(l_g_ >= 0.0))
    throw ConfigError("Coefficients: Lipschitz bounds must be nonnegative");
  if (!(gamma_min_ > 0.0))
    throw ConfigError("Coefficients: gamma_min must be positive");

  // Spot-check the declared bounds and compute the drift-ratio envelope on a
  // uniform grid over [0,1]. The grid runs over both r (for the declared
  // bounds on γ, g) and u (for the ratio, which evaluates at √u).
  const int cells = static_cast<int>(std::round(1.0 / kGridStep));
  const double slack = 1e-9;
  double prev_gamma = 0.0, prev_g = 0.0;
  ratio_max_ = -std::numeric_limits<double>::infinity();
  ratio_min_ = std::numeric_limits<double>::infinity();
  for (int i = 0; i <= cells; ++i) {
    const double r = static_cast<double>(i) * kGridStep;
    const double gam = gamma_(r);
    const double gg = g_(r);
    if (!std::isfinite(gam) || !std::isfinite(gg))
      throw ConfigError("Coefficients: non-finite coefficient value at r = " +
                        std::to_string(r));
    if (!(gam >= gamma_min_ - slack))
      throw ConfigError("Coefficients: gamma drops below the declared minimum at r = " +
                        std::to_string(r));
    if (i > 0) {
      if (std::fabs(gam - prev_gamma) > l_gamma_ * kGridStep + slack)
        throw ConfigError("Coefficients: gamma violates its declared Lipschitz bound near r = " +
                          std::to_string(r));
      if (std::fabs(gg - prev_g) > l_g_ * kGridStep + slack)
        throw ConfigError("Coefficients: g violates its declared Lipschitz bound near r = " +
                          std::to_string(r));
    }
    prev_gamma = gam;
    prev_g = gg;

    const double u = static_cast<double>(i) * kGridStep;
    const double gt = gamma_(std::sqrt(u));
    const double ratio = 2.0 * g_(std::sqrt(u)) / (gt * gt) - (n_ - 1);
    ratio_max_ = std::max(ratio_max_, ratio);
    ratio_min_ = std::min(ratio_min_, ratio);
  }

  const double gamma1 = gamma_(1.0);
  margin_ = g_(1.0) / (gamma1 * gamma1) - 0.5 * (n_ - 1);
  if (margin_ < -1e-12)
    throw ConfigError(
        "Coefficients: admissibility g(1)/gamma(1)^2 >= (n-1)/2 violated");
}

BallPoint step_projected(const BallPoint& x, const Eigen::VectorXd& dW, double dt,
                         const Coefficients& c) {
  if (dW.size() != x.dim())
    throw DimensionError("step_projected: noise dimension mismatch");
  if (!(dt > 0.0)) throw DomainError("step_projected: dt must be positive");
  const double r2 = x.squared_norm();
  const double r = std::sqrt(r2);
  Eigen::VectorXd out(x.dim());
  apply_sigma(x.coords(), r2, dW, out);
  out = x.coords() + c.gamma(r) * out - (c.g(r) * dt) * x.coords();
  const double rn = out.norm();
  if (rn > 1.0) out /= rn;
  return BallPoint(std::move(out));
}

SpherePoint step_spherical_bm(const SpherePoint& z, const Eigen::VectorXd& dW,
                              double dt) {
  if (dW.size() != z.dim())
    throw DimensionError("step_spherical_bm: noise dimension mismatch");
  if (!(dt > 0.0)) throw DomainError("step_spherical_bm: dt must be positive");
  const int d = z.dim();
  Eigen::VectorXd out =
      z.coords() + (dW - z.coords().dot(dW) * z.coords()) -
      (0.5 * (d - 1) * dt) * z.coords();
  return renormalize_sphere(std::move(out));
}

double step_wf(double u, double db, double dt, const WfParams& p) {
  if (!(dt > 0.0)) throw DomainError("step_wf: dt must be positive");
  const double up = std::max(u, 0.0);
  const double om = std::max(1.0 - u, 0.0);
  const double drift =
      p.drift_override ? p.drift_override(u) : p.alpha * (1.0 - u) - p.beta * u;
  return clamp01(u + 2.0 * std::sqrt(up * om) * db + drift * dt);
}

double step_besq(double v, double db, double dt, double delta) {
  if (!(dt > 0.0)) throw DomainError("step_besq: dt must be positive");
  return std::max(v + 2.0 * std::sqrt(std::max(v, 0.0)) * db + delta * dt, 0.0);
}

double step_radial(double r, double dtheta, double dt, const Coefficients& c) {
  if (!(dt > 0.0)) throw DomainError("step_radial: dt must be positive");
  if (r <= kRadialFloor)
    throw SingularityError(
        "step_radial: r at or below the 1e-8 floor; simulate U = R^2 and take "
        "square roots instead");
  const double gam = c.gamma(r);
  const double drift =
      ((c.n() - 1) * gam * gam - 2.0 * c.g(r) * r * r) / (2.0 * r);
  const double diff = gam * std::sqrt(std::max(1.0 - r * r, 0.0));
  return std::clamp(r + diff * dtheta + drift * dt, kRadialFloor, 1.0);
}

double step_u(double u, double dtheta, double dt, const Coefficients& c) {
  if (!(dt > 0.0)) throw DomainError("step_u: dt must be positive");
  const double gt = c.gamma_tilde(u);
  const double gt2 = gt * gt;
  const double drift =
      gt2 * (c.n() * (1.0 - u) - (2.0 * c.g_tilde(u) / gt2 - (c.n() - 1)) * u);
  const double diff =
      2.0 * gt * std::sqrt(std::max(u, 0.0) * std::max(1.0 - u, 0.0));
  return clamp01(u + diff * dtheta + drift * dt);
}

PathGrid::PathGrid(int dim, std::size_t n_states, double t0, double dt,
                   std::uint64_t seed, std::int64_t path_id)
    : dim_(dim),
      n_states_(n_states),
      t0_(t0),
      dt_(dt),
      seed_(seed),
      path_id_(path_id),
      alive_until_(n_states == 0 ? 0 : n_states - 1) {
  if (dim_ < 1) throw DimensionError("PathGrid: dim must be >= 1");
  if (n_states_ < 1) throw DomainError("PathGrid: need at least one state");
  if (!(dt_ > 0.0)) throw DomainError("PathGrid: dt must be positive");
  data_.assign(n_states_ * static_cast<std::size_t>(dim_), 0.0);
}

void PathGrid::set_alive_until(std::size_t k) {
  if (k >= n_states_) throw RangeError("PathGrid: alive_until out of range");
  alive_until_ = k;
}

void SphericalBmStepper::validate_initial(const Eigen::VectorXd& x0) const {
  if (std::fabs(x0.norm() - 1.0) > kBallEps)
    throw DomainError("spherical BM: initial state must be a unit vector");
}

void SphericalBmStepper::step(const Eigen::VectorXd& x, const Eigen::VectorXd& dw,
                              double dt, Eigen::VectorXd& out) const {
  out = x + (dw - x.dot(dw) * x) - (0.5 * (d - 1) * dt) * x;
  const double rn = out.norm();
  if (rn == 0.0 || !std::isfinite(rn))
    throw SingularityError("spherical BM: renormalization hit the zero vector");
  out /= rn;
}

void ProjectedStepper::validate_initial(const Eigen::VectorXd& x0) const {
  if (x0.norm() > 1.0 + kBallEps)
    throw DomainError("projected process: initial state must lie in the closed ball");
}

void ProjectedStepper::step(const Eigen::VectorXd& x, const Eigen::VectorXd& dw,
                            double dt, Eigen::VectorXd& out) const {
  const double r2 = std::min(x.squaredNorm(), 1.0);
  const double r = std::sqrt(r2);
  apply_sigma(x, r2, dw, out);
  out = x + coeffs.gamma(r) * out - (coeffs.g(r) * dt) * x;
  const double rn = out.norm();
  if (rn > 1.0) out /= rn;
}

void WfStepper::validate_initial(double u0) const {
  if (!(u0 >= 0.0 && u0 <= 1.0))
    throw DomainError("WF: initial state must lie in [0,1]");
}

ScalarStep WfStepper::step(double u, double db, double dt) const {
  const double v = step_wf(u, db, dt, params);
  const bool dead = params.beta < 0.0 && !params.drift_override && v >= 1.0;
  return {v, dead};
}

void BesqStepper::validate_initial(double v0) const {
  if (!(v0 >= 0.0)) throw DomainError("BESQ: initial state must be >= 0");
}

ScalarStep BesqStepper::step(double v, double db, double dt) const {
  const double w = step_besq(v, db, dt, delta);
  const bool dead = delta < 0.0 && w <= 0.0;
  return {w, dead};
}

void RadialStepper::validate_initial(double r0) const {
  if (!(r0 > kRadialFloor && r0 <= 1.0))
    throw DomainError("radial process: initial state must lie in (1e-8, 1]");
}

ScalarStep RadialStepper::step(double r, double dtheta, double dt) const {
  return {step_radial(r, dtheta, dt, coeffs), false};
}

void UStepper::validate_initial(double u0) const {
  if (!(u0 >= 0.0 && u0 <= 1.0))
    throw DomainError("U process: initial state must lie in [0,1]");
}

ScalarStep UStepper::step(double u, double dtheta, double dt) const {
  return {step_u(u, dtheta, dt, coeffs), false};
}

PathGrid squared_radius(const PathGrid& path) {
  PathGrid out(1, path.size(), path.t0(), path.dt(), path.seed(), path.path_id());
  out.set_alive_until(path.alive_until());
  for (std::size_t k = 0; k < path.size(); ++k)
    out.state(k)[0] = std::min(path.state(k).squaredNorm(), 1.0);
  return out;
}

}  // namespace balldiff
