#pragma once

#include <functional>

#include "balldiff/processes.hpp"

namespace balldiff {

// A time change S evaluated on a path's grid: values[k] = S(grid_times[k]),
// starting from S(s0) = 0.  Strictly increasing because the integrand is
// positive.
struct TimeChange {
    double s0 = 0.0;
    std::vector<double> grid_times;  // increasing, grid_times[0] == s0
    std::vector<double> values;      // strictly increasing, values[0] == 0

    double horizon() const { return values.back(); }
};

// Trapezoidal cumulative integral of weight(state) along a scalar path,
// starting at the grid knot closest to s0 (which must lie on the grid).
// Throws SingularityError (with the offending grid index) if the weight is
// non-finite at any visited state, and ConfigError if s0 is off the grid or
// past the final knot.
TimeChange integrate_time_change(const PathGrid& path,
                                 const std::function<double(double)>& weight,
                                 double s0);

// Right-continuous inverse T(tau): monotone linear interpolation between the
// bracketing knots.  T(0) = s0.  Throws RangeError when tau lies outside
// [0, horizon()] -- the caller must extend the path first.
double invert_time_change(const TimeChange& tc, double tau);

// Radial part and time-changed angular part of a ball-valued path:
// X_t = R_t * V(S_{s0}(t)) with S the clock with weight gamma^2(r)/r^2.
// r_path lives on the original grid; v_path holds unit vectors sampled at
// T(k * dtau) for a uniform dtau grid covering [0, S_{s0}(T)], with
// dtau = S/ceil(S/dt).
struct SkewDecomposition {
    PathGrid r_path;
    PathGrid v_path;
    TimeChange clock;
};

SkewDecomposition skew_decompose(const PathGrid& x_path, double s0,
                                 const Coefficients& c);

// Quotient U = X/(X+Y) of two squared-Bessel paths, resampled on the clock
// rho_t = int_0^t du/(X_u + Y_u): the result is a unit-rate Wright--Fisher
// path on a uniform grid covering the rho horizon.  Requires matching grids,
// x0 + y0 > 0; stops at the shorter lifetime.
PathGrid warren_yor_quotient(const PathGrid& x_path, const PathGrid& y_path);

}  // namespace balldiff
