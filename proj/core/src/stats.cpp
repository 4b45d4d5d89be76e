#include "balldiff/stats.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "json.hpp"

#include "balldiff/errors.hpp"
#include "balldiff/special_functions.hpp"
#include "fnv.hpp"

namespace balldiff {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

using detail::fnv1a;
using detail::format_real;
using detail::hex64;

}  // namespace

std::string to_json_string(const TestReport& r) {
    nlohmann::ordered_json j;
    j["name"] = r.name;
    j["statistic"] = r.statistic;
    if (std::isnan(r.p_value))
        j["p_value"] = nullptr;
    else
        j["p_value"] = r.p_value;
    j["threshold"] = r.threshold;
    j["pass"] = r.pass;
    j["sample_size"] = r.sample_size;
    j["config_digest"] = r.config_digest;
    j["seed"] = r.seed;
    return j.dump();
}

TestReport ks_one_sample(std::vector<double> sample,
                         const std::function<double(double)>& cdf,
                         const std::string& name) {
    if (sample.empty()) throw DomainError("ks_one_sample: empty sample");
    std::sort(sample.begin(), sample.end());
    const auto n = sample.size();
    const double inv_n = 1.0 / static_cast<double>(n);
    double d = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double f = cdf(sample[i]);
        d = std::max(d, static_cast<double>(i + 1) * inv_n - f);
        d = std::max(d, f - static_cast<double>(i) * inv_n);
    }
    TestReport r;
    r.name = name;
    r.statistic = d;
    r.p_value = kolmogorov_survival(std::sqrt(static_cast<double>(n)) * d);
    r.threshold = kSignificance;
    r.pass = r.p_value >= r.threshold;
    r.sample_size = n;
    return r;
}

TestReport ks_two_sample(std::vector<double> a, std::vector<double> b,
                         const std::string& name) {
    if (a.empty() || b.empty()) throw DomainError("ks_two_sample: empty sample");
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    const double na = static_cast<double>(a.size());
    const double nb = static_cast<double>(b.size());
    std::size_t i = 0, j = 0;
    double d = 0.0;
    while (i < a.size() && j < b.size()) {
        const double v = std::min(a[i], b[j]);
        while (i < a.size() && a[i] <= v) ++i;
        while (j < b.size() && b[j] <= v) ++j;
        d = std::max(d, std::fabs(static_cast<double>(i) / na -
                                  static_cast<double>(j) / nb));
    }
    const double ne = na * nb / (na + nb);
    TestReport r;
    r.name = name;
    r.statistic = d;
    r.p_value = kolmogorov_survival(std::sqrt(ne) * d);
    r.threshold = kSignificance;
    r.pass = r.p_value >= r.threshold;
    r.sample_size = a.size() + b.size();
    return r;
}

TestReport chi_square_density_test(const std::vector<double>& sample,
                                   const std::function<double(double)>& density,
                                   double lo, double hi, int bins,
                                   const std::string& name) {
    if (bins < 5) throw ConfigError("chi_square: need at least 5 bins");
    if (!(hi > lo)) throw ConfigError("chi_square: empty support interval");
    if (sample.empty()) throw DomainError("chi_square: empty sample");

    const double width = (hi - lo) / bins;
    std::vector<double> mass(bins, 0.0);
    std::vector<bool> divergent(bins, false);
    for (int k = 0; k < bins; ++k) {
        const double a = lo + k * width;
        const double b = a + width;
        const double fa = density(a);
        const double fm = density(0.5 * (a + b));
        const double fb = density(b);
        if (!std::isfinite(fa) || !std::isfinite(fm) || !std::isfinite(fb)) {
            if (k == 0 || k == bins - 1) {
                divergent[k] = true;  // boundary divergence: exclude and note
                continue;
            }
            throw ConfigError(
                "chi_square: density is non-finite inside the support");
        }
        mass[k] = (fa + 4.0 * fm + fb) * width / 6.0;
        if (mass[k] < 0.0)
            throw ConfigError("chi_square: density integrates negatively");
    }

    // Count samples into kept bins; drop those in excluded boundary bins.
    std::vector<double> counts(bins, 0.0);
    std::size_t kept_n = 0;
    for (double x : sample) {
        if (x < lo || x > hi) continue;
        int k = std::min(bins - 1, static_cast<int>((x - lo) / width));
        if (divergent[k]) continue;
        counts[k] += 1.0;
        ++kept_n;
    }

    double kept_mass = 0.0;
    for (int k = 0; k < bins; ++k)
        if (!divergent[k]) kept_mass += mass[k];
    if (!(kept_mass > 0.0) || kept_n == 0)
        throw ConfigError("chi_square: no usable bins or samples");

    // Expected counts conditioned on the kept region; merge adjacent bins
    // until every expected count reaches 5.
    std::vector<double> exp_c, obs_c;
    for (int k = 0; k < bins; ++k) {
        if (divergent[k]) continue;
        exp_c.push_back(static_cast<double>(kept_n) * mass[k] / kept_mass);
        obs_c.push_back(counts[k]);
    }
    std::vector<double> exp_m, obs_m;
    double ea = 0.0, oa = 0.0;
    for (std::size_t k = 0; k < exp_c.size(); ++k) {
        ea += exp_c[k];
        oa += obs_c[k];
        if (ea >= 5.0) {
            exp_m.push_back(ea);
            obs_m.push_back(oa);
            ea = oa = 0.0;
        }
    }
    if (ea > 0.0 || oa > 0.0) {
        if (exp_m.empty()) throw ConfigError("chi_square: degenerate binning");
        exp_m.back() += ea;
        obs_m.back() += oa;
    }
    if (exp_m.size() < 2) throw ConfigError("chi_square: degenerate binning");

    double stat = 0.0;
    for (std::size_t k = 0; k < exp_m.size(); ++k) {
        const double diff = obs_m[k] - exp_m[k];
        stat += diff * diff / exp_m[k];
    }
    const auto dof = static_cast<double>(exp_m.size() - 1);

    TestReport r;
    r.name = name;
    r.statistic = stat;
    r.p_value = chi_square_sf(stat, dof);
    r.threshold = kSignificance;
    r.pass = r.p_value >= r.threshold;
    r.sample_size = kept_n;
    return r;
}

double sphere_coordinate_cdf(double x, double d) {
    if (!(d > 1.0))
        throw DomainError("sphere_coordinate_cdf: dimension must exceed 1");
    if (x <= -1.0) return 0.0;
    if (x >= 1.0) return 1.0;
    const double i = regularized_incomplete_beta(0.5, 0.5 * (d - 1.0), x * x);
    return 0.5 * (1.0 + (x >= 0.0 ? i : -i));
}

TestReport sphere_uniformity_test(const std::vector<SpherePoint>& points,
                                  const std::string& name) {
    if (points.size() < 100)
        throw DomainError("sphere_uniformity: need at least 100 points");
    const auto d = static_cast<int>(points.front().dim());
    if (d < 2)
        throw DimensionError("sphere_uniformity: need dimension >= 2");
    for (const auto& p : points)
        if (static_cast<int>(p.dim()) != d)
            throw DimensionError("sphere_uniformity: mixed dimensions");

    auto marginal_cdf = [d](double x) {
        return sphere_coordinate_cdf(x, static_cast<double>(d));
    };

    const double alpha = kSignificance / d;
    double worst_d = 0.0;
    double min_p = 1.0;
    bool all_pass = true;
    std::vector<double> coords(points.size());
    for (int c = 0; c < d; ++c) {
        for (std::size_t k = 0; k < points.size(); ++k)
            coords[k] = points[k].coords()[c];
        TestReport sub = ks_one_sample(coords, marginal_cdf);
        worst_d = std::max(worst_d, sub.statistic);
        min_p = std::min(min_p, sub.p_value);
        all_pass = all_pass && sub.p_value >= alpha;
    }

    TestReport r;
    r.name = name;
    r.statistic = worst_d;
    r.p_value = min_p;
    r.threshold = alpha;
    r.pass = all_pass;
    r.sample_size = points.size();
    return r;
}

PathGrid coalescence_functional(const PathGrid& x, const PathGrid& x_tilde,
                                double p) {
    if (!(p > 0.5) || !(p < 1.0))
        throw DomainError("coalescence power must lie in (1/2, 1)");
    if (x.dim() != x_tilde.dim() || x.size() != x_tilde.size() ||
        std::abs(x.t0() - x_tilde.t0()) > 1e-12 ||
        std::abs(x.dt() - x_tilde.dt()) > 1e-15)
        throw ConfigError("coalescence functional needs matching grids");

    PathGrid w(1, x.size(), x.t0(), x.dt(), x.seed(), x.path_id());
    for (std::size_t k = 0; k < x.size(); ++k) {
        const double diff2 = (x.state(k) - x_tilde.state(k)).squaredNorm();
        const double y = std::max(1.0 - x.state(k).squaredNorm(), 0.0);
        const double yt = std::max(1.0 - x_tilde.state(k).squaredNorm(), 0.0);
        const double dy = std::pow(y, p) - std::pow(yt, p);
        w.value(k) = diff2 + dy * dy;
    }
    w.set_alive_until(std::min(x.alive_until(), x_tilde.alive_until()));
    return w;
}

HittingStats hitting_statistics(const std::vector<PathGrid>& paths,
                                double level, Direction direction) {
    if (paths.empty()) throw DomainError("hitting_statistics: empty ensemble");
    HittingStats out;
    double time_sum = 0.0;
    for (const auto& path : paths) {
        if (path.dim() != 1)
            throw DimensionError("hitting_statistics expects scalar paths");
        for (std::size_t k = 0; k <= path.alive_until(); ++k) {
            const double v = path.value(k);
            const bool hit =
                direction == Direction::below ? v < level : v > level;
            if (hit) {
                ++out.hitters;
                time_sum += path.time(k);
                break;
            }
        }
    }
    out.fraction =
        static_cast<double>(out.hitters) / static_cast<double>(paths.size());
    out.mean_first_time =
        out.hitters > 0 ? time_sum / static_cast<double>(out.hitters) : kNaN;
    return out;
}

ReportSummary merge_reports(std::vector<TestReport> reports) {
    std::sort(reports.begin(), reports.end(),
              [](const TestReport& a, const TestReport& b) {
                  return a.name < b.name;
              });
    std::string canon;
    bool all = true;
    for (const auto& r : reports) {
        all = all && r.pass;
        canon += r.name;
        canon += '|';
        canon += format_real(r.statistic);
        canon += '|';
        canon += format_real(r.p_value);
        canon += '|';
        canon += format_real(r.threshold);
        canon += '|';
        canon += r.pass ? '1' : '0';
        canon += '|';
        canon += std::to_string(r.sample_size);
        canon += '|';
        canon += r.config_digest;
        canon += '|';
        canon += std::to_string(r.seed);
        canon += '\n';
    }
    ReportSummary s;
    s.overall_pass = all;
    s.count = reports.size();
    s.digest = hex64(fnv1a(canon));
    s.reports = std::move(reports);
    return s;
}

}  // namespace balldiff
