#include "balldiff/transforms.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "balldiff/errors.hpp"
#include "balldiff/geometry.hpp"

namespace balldiff {

namespace {

// Index of the grid knot at time s0, which must sit on the grid (within one
// part in 1e-6 of a step).
std::size_t knot_index(const PathGrid& path, double s0) {
    const double offset = (s0 - path.t0()) / path.dt();
    const auto k = static_cast<long long>(std::llround(offset));
    if (k < 0 || std::abs(offset - static_cast<double>(k)) > 1e-6)
        throw ConfigError("time change base s0 = " + std::to_string(s0) +
                          " does not lie on the path grid");
    const auto idx = static_cast<std::size_t>(k);
    if (idx + 1 >= path.size())
        throw RangeError(
            "time change base s0 leaves no integration window before the path "
            "horizon");
    return idx;
}

}  // namespace

TimeChange integrate_time_change(const PathGrid& path,
                                 const std::function<double(double)>& weight,
                                 double s0) {
    if (path.dim() != 1)
        throw DimensionError("time change integrand expects a scalar path");
    const std::size_t first = knot_index(path, s0);
    const std::size_t last = path.alive_until() + 1;

    TimeChange tc;
    tc.s0 = path.time(first);
    tc.grid_times.reserve(last - first);
    tc.values.reserve(last - first);
    tc.grid_times.push_back(tc.s0);
    tc.values.push_back(0.0);

    double prev_w = weight(path.value(first));
    if (!std::isfinite(prev_w))
        throw SingularityError(
            "time change integrand is non-finite at grid index " +
                std::to_string(first),
            first);
    double acc = 0.0;
    for (std::size_t k = first + 1; k < last; ++k) {
        const double w = weight(path.value(k));
        if (!std::isfinite(w))
            throw SingularityError(
                "time change integrand is non-finite at grid index " +
                    std::to_string(k),
                k);
        acc += 0.5 * (prev_w + w) * path.dt();
        tc.grid_times.push_back(path.time(k));
        tc.values.push_back(acc);
        prev_w = w;
    }
    return tc;
}

double invert_time_change(const TimeChange& tc, double tau) {
    if (tc.values.size() < 2)
        throw ConfigError("time change has no integration window");
    if (!(tau >= 0.0) || tau > tc.values.back())
        throw RangeError("clock time " + std::to_string(tau) +
                         " is outside the computed horizon " +
                         std::to_string(tc.values.back()) +
                         "; extend the path");
    // First knot with value >= tau; interpolate inside the bracketing cell.
    const auto it =
        std::lower_bound(tc.values.begin(), tc.values.end(), tau);
    const auto j = static_cast<std::size_t>(it - tc.values.begin());
    if (j == 0) return tc.grid_times.front();
    const double v0 = tc.values[j - 1];
    const double v1 = tc.values[j];
    const double frac = (tau - v0) / (v1 - v0);
    return tc.grid_times[j - 1] +
           frac * (tc.grid_times[j] - tc.grid_times[j - 1]);
}

SkewDecomposition skew_decompose(const PathGrid& x_path, double s0,
                                 const Coefficients& c) {
    const int n = x_path.dim();
    if (n < 2)
        throw DimensionError(
            "skew decomposition needs dimension >= 2; the angular part is "
            "degenerate on the interval");
    if (s0 < 0.0) throw ConfigError("skew decomposition base s0 must be >= 0");

    // Radial path |X| on the original grid.
    PathGrid r_path(1, x_path.size(), x_path.t0(), x_path.dt(),
                    x_path.seed(), x_path.path_id());
    for (std::size_t k = 0; k < x_path.size(); ++k)
        r_path.value(k) = x_path.state(k).norm();
    r_path.set_alive_until(x_path.alive_until());

    const std::size_t first = knot_index(x_path, s0);
    if (first == 0 && r_path.value(0) == 0.0)
        throw ConfigError(
            "skew decomposition from s0 = 0 needs a nonzero start; pass a "
            "positive base time instead");
    for (std::size_t k = first; k <= r_path.alive_until(); ++k)
        if (r_path.value(k) <= 1e-8)
            throw SingularityError(
                "radius underflow in skew decomposition at grid index " +
                    std::to_string(k),
                k);

    const double gmin = c.gamma_min();
    auto weight = [&c, gmin](double r) {
        const double gam = std::max(c.gamma(r), gmin);
        return gam * gam / (r * r);
    };
    TimeChange clock = integrate_time_change(r_path, weight, s0);

    // Uniform clock grid: dtau = S/ceil(S/dt) so the horizon is covered
    // exactly and cells never exceed the simulation step.
    const double total = clock.horizon();
    const auto cells = static_cast<std::size_t>(
        std::max(1.0, std::ceil(total / x_path.dt() - 1e-9)));
    const double dtau = total / static_cast<double>(cells);

    PathGrid v_path(n, cells + 1, 0.0, dtau, x_path.seed(), x_path.path_id());
    for (std::size_t k = 0; k <= cells; ++k) {
        const double tau = std::min(static_cast<double>(k) * dtau, total);
        const double t = invert_time_change(clock, tau);
        // Interpolate X between the bracketing knots, then push to the sphere.
        const double offset = (t - x_path.t0()) / x_path.dt();
        const auto lo = std::min(
            static_cast<std::size_t>(std::max(0.0, std::floor(offset))),
            x_path.size() - 2);
        const double frac =
            std::clamp(offset - static_cast<double>(lo), 0.0, 1.0);
        Eigen::VectorXd x =
            (1.0 - frac) * x_path.state(lo) + frac * x_path.state(lo + 1);
        v_path.state(k) = renormalize_sphere(std::move(x)).coords();
    }
    return SkewDecomposition{std::move(r_path), std::move(v_path),
                             std::move(clock)};
}

PathGrid warren_yor_quotient(const PathGrid& x_path, const PathGrid& y_path) {
    if (x_path.dim() != 1 || y_path.dim() != 1)
        throw DimensionError("quotient transform expects scalar paths");
    if (x_path.size() != y_path.size() ||
        std::abs(x_path.t0() - y_path.t0()) > 1e-12 ||
        std::abs(x_path.dt() - y_path.dt()) > 1e-15)
        throw ConfigError("quotient transform needs paths on matching grids");
    const double x0 = x_path.value(0);
    const double y0 = y_path.value(0);
    if (!(x0 + y0 > 0.0))
        throw DomainError("quotient transform degenerate: x0 + y0 must be > 0");

    const std::size_t last =
        std::min(x_path.alive_until(), y_path.alive_until()) + 1;

    // rho_t = int_0^t du/(X_u + Y_u), trapezoidal on the shared grid.
    std::vector<double> rho(last, 0.0);
    double prev_w = 1.0 / (x0 + y0);
    for (std::size_t k = 1; k < last; ++k) {
        const double s = x_path.value(k) + y_path.value(k);
        if (!(s > 0.0) || !std::isfinite(s))
            throw SingularityError(
                "quotient clock integrand is non-finite at grid index " +
                    std::to_string(k),
            k);
        const double w = 1.0 / s;
        rho[k] = rho[k - 1] + 0.5 * (prev_w + w) * x_path.dt();
        prev_w = w;
    }

    const double total = rho.back();
    if (last < 2 || total <= 0.0) {
        // Killed immediately: the quotient exists only at time zero.
        PathGrid u_path(1, 1, 0.0, x_path.dt(), x_path.seed(),
                        x_path.path_id());
        u_path.value(0) = x0 / (x0 + y0);
        return u_path;
    }

    const auto cells = static_cast<std::size_t>(
        std::max(1.0, std::ceil(total / x_path.dt() - 1e-9)));
    const double dtau = total / static_cast<double>(cells);
    PathGrid u_path(1, cells + 1, 0.0, dtau, x_path.seed(), x_path.path_id());

    std::size_t j = 1;  // rho is increasing: sweep once
    for (std::size_t k = 0; k <= cells; ++k) {
        const double tau = std::min(static_cast<double>(k) * dtau, total);
        while (j + 1 < last && rho[j] < tau) ++j;
        const double r0 = rho[j - 1];
        const double r1 = rho[j];
        const double frac =
            r1 > r0 ? std::clamp((tau - r0) / (r1 - r0), 0.0, 1.0) : 0.0;
        const double xv = (1.0 - frac) * x_path.value(j - 1) +
                          frac * x_path.value(j);
        const double yv = (1.0 - frac) * y_path.value(j - 1) +
                          frac * y_path.value(j);
        const double s = xv + yv;
        u_path.value(k) =
            s > 0.0 ? std::clamp(xv / s, 0.0, 1.0) : (yv <= 0.0 ? 1.0 : 0.0);
    }
    return u_path;
}

}  // namespace balldiff
