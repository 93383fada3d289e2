#include "gof/special_functions.hpp"

#include <boost/math/special_functions/gamma.hpp>

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace gof {

namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;

void require_finite(double x, const char* what) {
  if (!std::isfinite(x)) throw std::domain_error(std::string(what) + ": non-finite argument");
}

template <std::size_t N>
double horner(const double (&c)[N], double r) {
  double v = c[N - 1];
  for (std::size_t i = N - 1; i-- > 0;) v = v * r + c[i];
  return v;
}

}  // namespace

double std_normal_cdf(double x) {
  require_finite(x, "std_normal_cdf");
  return 0.5 * std::erfc(-x * kInvSqrt2);
}

double std_normal_sf(double x) {
  require_finite(x, "std_normal_sf");
  return 0.5 * std::erfc(x * kInvSqrt2);
}

double std_normal_pdf(double x) {
  return std::exp(-0.5 * x * x) * (0.5 * std::numbers::inv_sqrtpi * std::numbers::sqrt2);
}

// Wichura, M.J. (1988) Algorithm AS241, Applied Statistics 37, 477-484.
double std_normal_quantile_fast(double p) noexcept {
  static constexpr double a[8] = {3.387132872796366608,   133.14166789178437745,
                                  1971.5909503065514427,  13731.693765509461125,
                                  45921.953931549871457,  67265.770927008700853,
                                  33430.575583588128105,  2509.0809287301226727};
  static constexpr double b[8] = {1.0,                   42.313330701600911252,
                                  687.1870074920579083,  5394.1960214247511077,
                                  21213.794301586595867, 39307.89580009271061,
                                  28729.085735721942674, 5226.495278852545925};
  static constexpr double c[8] = {1.42343711074968357734,  4.6303378461565452959,
                                  5.7694972214606914055,   3.64784832476320460504,
                                  1.27045825245236838258,  0.24178072517745061177,
                                  0.0227238449892691845833, 7.7454501427834140764e-4};
  static constexpr double d[8] = {1.0,
                                  2.05319162663775882187,
                                  1.6763848301838038494,
                                  0.68976733498510000455,
                                  0.14810397642748007459,
                                  0.0151986665636164571966,
                                  5.475938084995344946e-4,
                                  1.05075007164441684324e-9};
  static constexpr double e[8] = {6.6579046435011037772,    5.4637849111641143699,
                                  1.7848265399172913358,    0.29656057182850489123,
                                  0.026532189526576123093,  0.0012426609473880784386,
                                  2.71155556874348757815e-5, 2.01033439929228813265e-7};
  static constexpr double f[8] = {1.0,
                                  0.59983220655588793769,
                                  0.13692988092273580531,
                                  0.0148753612908506148525,
                                  7.868691311456132591e-4,
                                  1.8463183175100546818e-5,
                                  1.4215117583164458887e-7,
                                  2.04426310338993978564e-15};

  const double q = p - 0.5;
  if (std::fabs(q) <= 0.425) {
    const double r = 0.180625 - q * q;
    return q * horner(a, r) / horner(b, r);
  }
  double r = q < 0.0 ? p : 1.0 - p;
  r = std::sqrt(-std::log(r));
  double val;
  if (r <= 5.0) {
    r -= 1.6;
    val = horner(c, r) / horner(d, r);
  } else {
    r -= 5.0;
    val = horner(e, r) / horner(f, r);
  }
  return q < 0.0 ? -val : val;
}

double std_normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) throw std::domain_error("std_normal_quantile: p must lie in (0,1)");
  if (p == 0.5) return 0.0;
  // Work in the lower tail where Phi is evaluated with full relative accuracy;
  // 1 - p is exact for p >= 0.5.
  if (p > 0.5) return -std_normal_quantile(1.0 - p);

  double x = std_normal_quantile_fast(p);
  double lo = -40.0;
  double hi = 0.0;
  for (int it = 0; it < 60; ++it) {
    const double resid = std_normal_cdf(x) - p;
    if (resid == 0.0) break;
    if (resid > 0.0) hi = x; else lo = x;
    const double step = resid / std_normal_pdf(x);
    // A step below the target resolution may round to x itself, so it must
    // end the iteration before the bracket test sees next == lo.
    if (std::fabs(step) <= 1e-15 * std::max(1.0, std::fabs(x))) {
      x -= step;
      break;
    }
    double next = x - step;
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    x = next;
  }
  return x;
}

double chisq_cdf(double x, double nu) {
  if (!(nu > 0.0)) throw std::domain_error("chisq_cdf: nu must be positive");
  if (std::isnan(x)) throw std::domain_error("chisq_cdf: NaN argument");
  if (x <= 0.0) return 0.0;
  if (std::isinf(x)) return 1.0;
  return boost::math::gamma_p(0.5 * nu, 0.5 * x);
}

double chisq_sf(double x, double nu) {
  if (!(nu > 0.0)) throw std::domain_error("chisq_sf: nu must be positive");
  if (std::isnan(x)) throw std::domain_error("chisq_sf: NaN argument");
  if (x <= 0.0) return 1.0;
  if (std::isinf(x)) return 0.0;
  return boost::math::gamma_q(0.5 * nu, 0.5 * x);
}

double noncentral_chisq_cdf(double x, int nu, double delta) {
  if (nu < 1) throw std::domain_error("noncentral_chisq_cdf: nu must be >= 1");
  if (!(delta >= 0.0) || !std::isfinite(delta))
    throw std::domain_error("noncentral_chisq_cdf: delta must be finite and >= 0");
  if (std::isnan(x)) throw std::domain_error("noncentral_chisq_cdf: NaN argument");
  if (x <= 0.0) return 0.0;
  if (std::isinf(x)) return 1.0;
  if (delta == 0.0) return chisq_cdf(x, nu);

  constexpr double kMassTol = 1e-14;
  const double lambda = 0.5 * delta;
  const double half_x = 0.5 * x;
  const double half_nu = 0.5 * nu;
  const long mode = static_cast<long>(std::floor(lambda));

  const double w_mode =
      std::exp(-lambda + static_cast<double>(mode) * std::log(lambda) - std::lgamma(mode + 1.0));

  double sum = 0.0;
  double mass = 0.0;

  // Downward from the mode to j = 0.
  double w = w_mode;
  for (long j = mode; j >= 0; --j) {
    sum += w * boost::math::gamma_p(half_nu + static_cast<double>(j), half_x);
    mass += w;
    if (w < 1e-300) break;
    w *= static_cast<double>(j) / lambda;
  }
  // Upward from mode + 1 until the remaining Poisson mass is negligible.
  w = w_mode * lambda / static_cast<double>(mode + 1);
  for (long j = mode + 1; 1.0 - mass >= kMassTol && w > 0.0; ++j) {
    sum += w * boost::math::gamma_p(half_nu + static_cast<double>(j), half_x);
    mass += w;
    w *= lambda / static_cast<double>(j + 1);
    if (j - mode > 100000) break;
  }
  return std::min(1.0, std::max(0.0, sum));
}

}  // namespace gof
