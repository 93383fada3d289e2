#pragma once

namespace gof {

// Standard normal CDF, absolute error well below 1e-12 (erfc based).
// Throws std::domain_error for non-finite x.
double std_normal_cdf(double x);

// 1 - Phi(x) evaluated without cancellation in the upper tail.
double std_normal_sf(double x);

double std_normal_pdf(double x);

// Inverse of std_normal_cdf on (0,1). Wichura's AS241 starting point,
// polished by Newton steps that fall back to bisection when a step leaves
// the current bracket. Throws std::domain_error unless 0 < p < 1.
double std_normal_quantile(double p);

// Raw AS241 rational approximation without refinement (relative error
// about 1e-16). Used by the variate generators, which call it billions of
// times. Caller guarantees 0 < p < 1.
double std_normal_quantile_fast(double p) noexcept;

// Central chi-square CDF and survival function with nu degrees of freedom.
double chisq_cdf(double x, double nu);
double chisq_sf(double x, double nu);

// Noncentral chi-square CDF H_{nu,delta}(x) as a Poisson(delta/2) mixture
// of central chi-square CDFs. Summation starts at the modal Poisson index,
// runs down to 0 and then upward until the unvisited Poisson mass drops
// below 1e-14. Returns 0 for x < 0.
double noncentral_chisq_cdf(double x, int nu, double delta);

}  // namespace gof
