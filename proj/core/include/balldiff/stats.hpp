#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "balldiff/geometry.hpp"
#include "balldiff/processes.hpp"

namespace balldiff {

// Fixed suite significance: statistical checks run at 1% with pinned seeds so
// they are deterministic, not flaky.
inline constexpr double kSignificance = 0.01;

// Outcome of one statistical check.  Exactly one decision convention applies
// per test and is encoded in the fields themselves:
//   p-value tests:    pass == (p_value >= threshold), threshold = significance
//   statistic tests:  pass == (statistic <= threshold), p_value = NaN
struct TestReport {
    std::string name;
    double statistic = 0.0;
    double p_value = 0.0;  // NaN for pure threshold tests
    double threshold = 0.0;
    bool pass = false;
    std::size_t sample_size = 0;
    std::string config_digest;
    std::uint64_t seed = 0;
};

// JSON object with fields exactly: name, statistic, p_value, threshold,
// pass, sample_size, config_digest, seed.  A NaN p_value serializes as null.
std::string to_json_string(const TestReport& report);

// Kolmogorov–Smirnov test of a sample against a target CDF.  D is the exact
// empirical sup-gap; the p-value uses the asymptotic Kolmogorov law at
// sqrt(N)·D (adequate for the suite's N >= 100).
TestReport ks_one_sample(std::vector<double> sample,
                         const std::function<double(double)>& cdf,
                         const std::string& name = "ks_one_sample");

// Two-sample Kolmogorov–Smirnov test with effective size Na·Nb/(Na+Nb).
TestReport ks_two_sample(std::vector<double> a, std::vector<double> b,
                         const std::string& name = "ks_two_sample");

// Pearson chi-square test of a sample against an (unnormalized-ok) density on
// [lo, hi] with equal-width bins.  Bin masses come from Simpson quadrature;
// boundary bins where the density evaluates non-finite are excluded (samples
// falling there are dropped and the remaining mass renormalized); adjacent
// bins are merged until every expected count is >= 5; dof = bins - 1.
TestReport chi_square_density_test(const std::vector<double>& sample,
                                   const std::function<double(double)>& density,
                                   double lo, double hi, int bins,
                                   const std::string& name = "chi_square");

// CDF of one coordinate of a uniform point on S^{d-1}:
// F(x) = (1 + sign(x) I_{x^2}(1/2, (d-1)/2)) / 2.  Fractional d > 1 is
// allowed: the same formula gives the single-coordinate marginal of the
// weighted ball density proportional to (1-|x|^2)^{(ell-2)/2} with d = n+ell.
double sphere_coordinate_cdf(double x, double d);

// Coordinate-marginal uniformity test on the sphere S^{d-1}: each coordinate
// is KS-tested against F(x) = (1 + sign(x) I_{x^2}(1/2, (d-1)/2)) / 2 and the
// overall verdict is Bonferroni-adjusted (each coordinate at 0.01/d).
// Reported statistic is the worst coordinate D, p_value the smallest
// coordinate p.  Needs at least 100 points.
TestReport sphere_uniformity_test(const std::vector<SpherePoint>& points,
                                  const std::string& name = "sphere_uniformity");

// Coupling functional W_t = |X_t - X~_t|^2 + (Y^p - Y~^p)^2 with
// Y = 1 - |X|^2, evaluated on the shared grid.  p must lie in (1/2, 1);
// the default minimizes the functional's drift bound.
inline constexpr double kCoalescencePower = 0.64644660940672624;  // 1 - sqrt(2)/4
PathGrid coalescence_functional(const PathGrid& x, const PathGrid& x_tilde,
                                double p = kCoalescencePower);

enum class Direction { below, above };

struct HittingStats {
    double fraction = 0.0;         // share of paths that cross
    double mean_first_time = 0.0;  // among hitters; NaN when none hit
    std::size_t hitters = 0;
};

// First-passage summary over an ensemble of scalar paths: a path counts as a
// hitter if some state at index <= alive_until is strictly beyond the level
// in the given direction (the initial state included).
HittingStats hitting_statistics(const std::vector<PathGrid>& paths,
                                double level, Direction direction);

// Order-independent aggregation of reports: sorted by name, digested with
// FNV-1a over the canonical field serialization, overall pass = conjunction.
struct ReportSummary {
    bool overall_pass = true;
    std::size_t count = 0;
    std::string digest;
    std::vector<TestReport> reports;  // sorted by name
};

ReportSummary merge_reports(std::vector<TestReport> reports);

}  // namespace balldiff
