#pragma once

// Full-truncation Euler steppers for every diffusion in play and the common
// path simulator. The square-root diffusion coefficients are not Lipschitz at
// the boundaries, so each step clamps the state back into its space (ball
// exits are projected radially, sphere states renormalized, scalar states
// clamped); this is the full-truncation scheme.

#include <cmath>
#include <concepts>
#include <cstdint>
#include <functional>
#include <span>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "balldiff/errors.hpp"
#include "balldiff/geometry.hpp"
#include "balldiff/noise.hpp"

namespace balldiff {

// The radial stepper refuses to step below this; the 1/r drift singularity
// makes the U = R² route the supported way to pass near the origin.
inline constexpr double kRadialFloor = 1e-8;

// Coefficient pair (γ, g) of the ball SDE dX = γ(|X|)σ(X)dB − g(|X|)X dt,
// with caller-declared Lipschitz bounds and positive lower bound for γ.
// Declared bounds and admissibility are spot-checked on a 1e-3 grid at
// construction; the drift-ratio envelope
//   M = max_{u∈[0,1]} (2 g̃(u)/γ̃²(u) − (n−1)),   m = min (same)
// with g̃(u) = g(√u), γ̃(u) = γ(√u) is computed by the same grid search.
class Coefficients {
 public:
  Coefficients(int n, std::function<double(double)> gamma,
               std::function<double(double)> g, double gamma_lipschitz,
               double g_lipschitz, double gamma_min);

  int n() const { return n_; }
  double gamma(double r) const { return gamma_(r); }
  double g(double r) const { return g_(r); }
  double gamma_tilde(double u) const { return gamma_(std::sqrt(u)); }
  double g_tilde(double u) const { return g_(std::sqrt(u)); }

  double gamma_lipschitz() const { return l_gamma_; }
  double g_lipschitz() const { return l_g_; }
  double gamma_min() const { return gamma_min_; }

  // Grid-evaluated extrema of 2g̃/γ̃² − (n−1) over u ∈ [0,1].
  double drift_ratio_max() const { return ratio_max_; }
  double drift_ratio_min() const { return ratio_min_; }

  // g(1)/γ²(1) − (n−1)/2; nonnegative by the construction check.
  double admissibility_margin() const { return margin_; }

 private:
  int n_;
  std::function<double(double)> gamma_;
  std::function<double(double)> g_;
  double l_gamma_;
  double l_g_;
  double gamma_min_;
  double ratio_max_;
  double ratio_min_;
  double margin_;
};

// Wright-Fisher parameters; drift α(1−u) − βu unless overridden. A negative β
// gives the process a finite lifetime ending when U reaches 1. drift_override
// is the hook for the time-changed squared-radius equation, which differs
// from WF only in the drift term.
struct WfParams {
  double alpha = 0.0;
  double beta = 0.0;
  std::function<double(double)> drift_override;

  WfParams(double alpha_, double beta_,
           std::function<double(double)> drift_override_ = nullptr)
      : alpha(alpha_), beta(beta_), drift_override(std::move(drift_override_)) {
    if (!(alpha >= 0.0)) throw DomainError("WfParams: alpha must be >= 0");
  }
};

// A simulated path on the uniform grid t0 + k·dt, flat row-major storage.
// alive_until is the index of the last live state; states past it repeat the
// death state for killed processes.
class PathGrid {
 public:
  PathGrid(int dim, std::size_t n_states, double t0, double dt,
           std::uint64_t seed, std::int64_t path_id);

  int dim() const { return dim_; }
  std::size_t size() const { return n_states_; }
  double t0() const { return t0_; }
  double dt() const { return dt_; }
  std::uint64_t seed() const { return seed_; }
  std::int64_t path_id() const { return path_id_; }

  std::size_t alive_until() const { return alive_until_; }
  void set_alive_until(std::size_t k);

  double time(std::size_t k) const { return t0_ + static_cast<double>(k) * dt_; }

  Eigen::Map<const Eigen::VectorXd> state(std::size_t k) const {
    return {data_.data() + k * dim_, dim_};
  }
  Eigen::Map<Eigen::VectorXd> state(std::size_t k) {
    return {data_.data() + k * dim_, dim_};
  }
  // Scalar paths (dim == 1).
  double value(std::size_t k) const { return data_[k]; }
  double& value(std::size_t k) { return data_[k]; }

  const std::vector<double>& data() const { return data_; }

 private:
  int dim_;
  std::size_t n_states_;
  double t0_;
  double dt_;
  std::uint64_t seed_;
  std::int64_t path_id_;
  std::size_t alive_until_;
  std::vector<double> data_;
};

// ---------------------------------------------------------------------------
// One-step integrators (free functions mirror the stepper structs below).

// Sphere: z + (I − zzᵀ)dW − ((d−1)/2) z dt, renormalized.
SpherePoint step_spherical_bm(const SpherePoint& z, const Eigen::VectorXd& dW,
                              double dt);

// Ball: x + γ(|x|)σ(x)dW − g(|x|)x dt, radially projected if it leaves the ball.
BallPoint step_projected(const BallPoint& x, const Eigen::VectorXd& dW, double dt,
                         const Coefficients& c);

// Wright-Fisher: u + 2√(u⁺(1−u)⁺)db + (α(1−u) − βu)dt clamped to [0,1].
double step_wf(double u, double db, double dt, const WfParams& p);

// Squared Bessel: v + 2√(v⁺)db + δ dt clamped at 0.
double step_besq(double v, double db, double dt, double delta);

// Radius: r + γ(r)√(1−r²)dθ + ((n−1)γ²(r) − 2g(r)r²)/(2r) dt, clamped to
// [kRadialFloor, 1]. Throws SingularityError for r at or below the floor.
double step_radial(double r, double dtheta, double dt, const Coefficients& c);

// Squared radius: u + 2γ̃(u)√(u⁺(1−u)⁺)dθ
//                   + γ̃²(u)(n(1−u) − (2g̃(u)/γ̃²(u) − (n−1))u)dt, clamped.
double step_u(double u, double dtheta, double dt, const Coefficients& c);

// ---------------------------------------------------------------------------
// Stepper objects consumed by simulate_path.

struct ScalarStep {
  double value;
  bool dead;
};

struct SphericalBmStepper {
  int d;

  explicit SphericalBmStepper(int dim) : d(dim) {
    if (d < 2) throw DimensionError("SphericalBmStepper: need dim >= 2");
  }
  int dim() const { return d; }
  void validate_initial(const Eigen::VectorXd& x0) const;
  void step(const Eigen::VectorXd& x, const Eigen::VectorXd& dw, double dt,
            Eigen::VectorXd& out) const;
};

struct ProjectedStepper {
  Coefficients coeffs;

  explicit ProjectedStepper(Coefficients c) : coeffs(std::move(c)) {}
  int dim() const { return coeffs.n(); }
  void validate_initial(const Eigen::VectorXd& x0) const;
  void step(const Eigen::VectorXd& x, const Eigen::VectorXd& dw, double dt,
            Eigen::VectorXd& out) const;
};

struct WfStepper {
  WfParams params;

  explicit WfStepper(WfParams p) : params(std::move(p)) {}
  void validate_initial(double u0) const;
  ScalarStep step(double u, double db, double dt) const;
};

struct BesqStepper {
  double delta;

  explicit BesqStepper(double d) : delta(d) {}
  void validate_initial(double v0) const;
  ScalarStep step(double v, double db, double dt) const;
};

struct RadialStepper {
  Coefficients coeffs;

  explicit RadialStepper(Coefficients c) : coeffs(std::move(c)) {}
  void validate_initial(double r0) const;
  ScalarStep step(double r, double dtheta, double dt) const;
};

struct UStepper {
  Coefficients coeffs;

  explicit UStepper(Coefficients c) : coeffs(std::move(c)) {}
  void validate_initial(double u0) const;
  ScalarStep step(double u, double dtheta, double dt) const;
};

template <class S>
concept VectorStepper = requires(const S& s, const Eigen::VectorXd& x,
                                 const Eigen::VectorXd& dw, double dt,
                                 Eigen::VectorXd& out) {
  { s.dim() } -> std::convertible_to<int>;
  s.validate_initial(x);
  s.step(x, dw, dt, out);
};

template <class S>
concept ScalarStepper = requires(const S& s, double u, double db, double dt) {
  s.validate_initial(u);
  { s.step(u, db, dt) } -> std::same_as<ScalarStep>;
};

// Number of steps for a horizon: ⌈T/dt⌉ with a guard against the ratio
// landing a hair above an integer in floating point.
inline std::size_t step_count(double t_horizon, double dt) {
  if (!(t_horizon > 0.0)) throw DomainError("simulate_path: T must be positive");
  if (!(dt > 0.0)) throw DomainError("simulate_path: dt must be positive");
  return static_cast<std::size_t>(std::ceil(t_horizon / dt - 1e-9));
}

// Simulates ⌈T/dt⌉ steps from x0; state k is at time t0 = 0 plus k·dt.
// Deterministic given (stepper, x0, driver). Killed scalar processes freeze
// their death state and stop consuming noise.
template <VectorStepper S>
PathGrid simulate_path(const S& stepper, const Eigen::VectorXd& x0, double t_horizon,
                       double dt, const NoiseDriver& driver) {
  const int d = stepper.dim();
  if (x0.size() != d) throw DimensionError("simulate_path: x0 has wrong dimension");
  if (driver.dim() < d)
    throw DimensionError("simulate_path: driver serves fewer components than the state");
  if (std::fabs(driver.dt() - dt) > 1e-15)
    throw ConfigError("simulate_path: driver dt does not match the step dt");
  stepper.validate_initial(x0);

  const std::size_t steps = step_count(t_horizon, dt);
  PathGrid path(d, steps + 1, 0.0, dt, driver.seed(), driver.path_id());
  path.state(0) = x0;
  Eigen::VectorXd cur = x0, nxt(d), dw(d);
  for (std::size_t k = 0; k < steps; ++k) {
    for (int i = 0; i < d; ++i)
      dw[i] = driver.gaussian_increment(static_cast<std::int64_t>(k), i);
    try {
      stepper.step(cur, dw, dt, nxt);
    } catch (const SingularityError& e) {
      throw SingularityError(std::string("at step ") + std::to_string(k + 1) +
                                 ": " + e.what(),
                             k + 1);
    }
    path.state(k + 1) = nxt;
    cur.swap(nxt);
  }
  return path;
}

template <ScalarStepper S>
PathGrid simulate_path(const S& stepper, double x0, double t_horizon, double dt,
                       const NoiseDriver& driver) {
  if (std::fabs(driver.dt() - dt) > 1e-15)
    throw ConfigError("simulate_path: driver dt does not match the step dt");
  stepper.validate_initial(x0);

  const std::size_t steps = step_count(t_horizon, dt);
  PathGrid path(1, steps + 1, 0.0, dt, driver.seed(), driver.path_id());
  path.state(0)[0] = x0;
  double cur = x0;
  for (std::size_t k = 0; k < steps; ++k) {
    const double db = driver.gaussian_increment(static_cast<std::int64_t>(k), 0);
    ScalarStep s;
    try {
      s = stepper.step(cur, db, dt);
    } catch (const SingularityError& e) {
      throw SingularityError(std::string("at step ") + std::to_string(k + 1) +
                                 ": " + e.what(),
                             k + 1);
    }
    path.state(k + 1)[0] = s.value;
    cur = s.value;
    if (s.dead) {
      path.set_alive_until(k + 1);
      for (std::size_t j = k + 2; j <= steps; ++j) path.state(j)[0] = s.value;
      break;
    }
  }
  return path;
}

// Pointwise |X_t|² of a ball-valued path; preserves grid metadata.
PathGrid squared_radius(const PathGrid& path);

}  // namespace balldiff
