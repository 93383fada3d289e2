#pragma once

// Test-only reference computations. Everything here is deliberately naive
// and independent of the library's evaluation paths.

#include "gof/statistics.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

namespace oracle {

// Phi(x) via the Marsaglia series 1/2 + phi(x) sum x^(2k+1)/(2k+1)!!
// in long double. Absolute error far below 1e-15 on [-9, 9].
inline long double phi_series(long double x) {
  long double term = x;
  long double sum = x;
  const long double x2 = x * x;
  for (int k = 1; k < 2000; ++k) {
    term *= x2 / (2 * k + 1);
    sum += term;
    if (std::fabs(term) < 1e-30L * std::fabs(sum)) break;
  }
  const long double pdf = std::exp(-0.5L * x2) / std::sqrt(2.0L * 3.14159265358979323846264338327950288L);
  return 0.5L + pdf * sum;
}

enum class Kind { weighted, hat, plain };

// Brute-force supremum of s(G_n(u) - u)/w over (a,b): a grid of `grid`
// steps over [a,b] (ends as one-sided limits) plus every jump point and its
// left limit inside (a,b). w = q(u), q(G_n(u)) or 1.
inline double brute_force_sup(std::span<const double> u, double a, double b, const gof::WeightFunction* q,
                              Kind kind, bool two_sided, std::size_t grid) {
  const std::size_t n = u.size();
  const double nd = static_cast<double>(n);
  const double root_n = std::sqrt(nd);
  auto value = [&](double x, double c) {
    double w = 1.0;
    if (kind == Kind::weighted) {
      if (x <= 0.0 || x >= 1.0) return 0.0;
      w = q->evaluate_unchecked(x);
    } else if (kind == Kind::hat) {
      if (c <= 0.0 || c >= 1.0) return 0.0;
      w = q->evaluate_unchecked(c);
    }
    const double d = c - x;
    return (two_sided ? std::fabs(d) : d) / w * root_n;
  };
  double best = -1e300;
  // Grid: EDF by a monotone pointer (count of points <= x).
  std::size_t below_eq = 0;
  std::size_t below = 0;
  for (std::size_t j = 0; j <= grid; ++j) {
    double x = a + (b - a) * static_cast<double>(j) / static_cast<double>(grid);
    if (j == grid) x = b;
    while (below_eq < n && u[below_eq] <= x) ++below_eq;
    while (below < n && u[below] < x) ++below;
    double c;
    if (j == 0) c = static_cast<double>(below_eq) / nd;          // right limit at a
    else if (j == grid) c = static_cast<double>(below) / nd;     // left limit at b
    else c = static_cast<double>(below_eq) / nd;
    best = std::max(best, value(x, c));
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (!(u[i] > a && u[i] < b)) continue;
    const auto lo = static_cast<double>(std::lower_bound(u.begin(), u.end(), u[i]) - u.begin());
    const auto hi = static_cast<double>(std::upper_bound(u.begin(), u.end(), u[i]) - u.begin());
    best = std::max(best, value(u[i], lo / nd));
    best = std::max(best, value(u[i], hi / nd));
  }
  return best;
}

// Brute force for any descriptor on uniform-scale data.
inline double brute_force_statistic(std::span<const double> u, const gof::StatisticDescriptor& d,
                                    std::size_t grid) {
  using F = gof::StatisticFamily;
  const auto sdp = gof::WeightFunction::sdp();
  const double nd = static_cast<double>(u.size());
  switch (d.family) {
    case F::cscshm_one_sided:
      return brute_force_sup(u, d.interval.a, d.interval.b, &*d.weight, Kind::weighted, false, grid);
    case F::cscshm_two_sided:
      return brute_force_sup(u, d.interval.a, d.interval.b, &*d.weight, Kind::weighted, true, grid);
    case F::cscshm_hat_one_sided:
      return brute_force_sup(u, d.interval.a, d.interval.b, &*d.weight, Kind::hat, false, grid);
    case F::cscshm_hat_two_sided:
      return brute_force_sup(u, d.interval.a, d.interval.b, &*d.weight, Kind::hat, true, grid);
    case F::hc:
      return brute_force_sup(u, 0.0, d.alpha0, &sdp, Kind::weighted, false, grid);
    case F::hc_plus:
      return brute_force_sup(u, 1.0 / nd, d.alpha0, &sdp, Kind::weighted, false, grid);
    case F::hc_star: {
      const auto k = static_cast<std::size_t>(std::floor(d.alpha0 * nd));
      if (k < 1 || !(u[0] < u[k - 1])) return 0.0;
      return brute_force_sup(u, u[0], u[k - 1], &sdp, Kind::weighted, false, grid);
    }
    case F::ks_two_sided:
      return brute_force_sup(u, 0.0, 1.0, nullptr, Kind::plain, true, grid);
  }
  return 0.0;
}

}  // namespace oracle
