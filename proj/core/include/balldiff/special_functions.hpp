#pragma once

// Scalar special functions needed by the densities and the test statistics.
// All of them are self-contained (no external math library): Lanczos
// log-gamma, the AS241 rational approximation for the normal quantile,
// Lentz-type continued fractions for the regularized incomplete beta and
// gamma functions, and the asymptotic Kolmogorov survival function.

namespace balldiff {

// log Γ(x) for x > 0. Lanczos approximation, relative error ~1e-14.
double log_gamma(double x);

// Standard normal CDF and its inverse. normal_quantile accepts p in (0,1);
// the rational approximation is accurate to ~1e-15 relative.
double normal_cdf(double x);
double normal_quantile(double p);

// Regularized incomplete beta I_x(a,b), a,b > 0, x in [0,1]. Continued
// fraction with the symmetry reduction I_x(a,b) = 1 - I_{1-x}(b,a);
// throws AccuracyError if the fraction fails to converge.
double regularized_incomplete_beta(double a, double b, double x);

// Regularized upper incomplete gamma Q(a,x) = Γ(a,x)/Γ(a), a > 0, x >= 0.
double regularized_gamma_q(double a, double x);

// Chi-square survival function with k degrees of freedom: Q(k/2, x/2).
double chi_square_sf(double x, int k);

// Survival function of the Kolmogorov distribution,
// Q(lambda) = 2 Σ_{j>=1} (-1)^{j-1} exp(-2 j² λ²), evaluated piecewise so it
// is accurate and monotone over the whole range.
double kolmogorov_survival(double lambda);

}  // namespace balldiff
