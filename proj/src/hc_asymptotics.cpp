#include "gof/hc_asymptotics.hpp"

#include "gof/parallel.hpp"
#include "gof/rng.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>

namespace gof {

std::string_view to_string(EvTarget t) noexcept {
  switch (t) {
    case EvTarget::one_sided_partial: return "exp(-exp(-x)/2)";
    case EvTarget::two_sided_partial: return "exp(-exp(-x))";
    case EvTarget::one_sided_full: return "exp(-2exp(-x))";
  }
  return "?";
}

namespace {

double target_weight(EvTarget t) {
  switch (t) {
    case EvTarget::one_sided_partial: return 0.5;
    case EvTarget::two_sided_partial: return 1.0;
    case EvTarget::one_sided_full: return 2.0;
  }
  return 1.0;
}

std::vector<double> uniform_sorted(std::int64_t n, RandomStream& rng) {
  std::vector<double> u(static_cast<std::size_t>(n));
  for (auto& v : u) v = rng.uniform_open();
  std::sort(u.begin(), u.end());
  return u;
}

// Max over the empirical CDF jumps of |F_emp - F_target|.
double ks_against(const std::vector<double>& sorted, EvTarget target) {
  const double m = static_cast<double>(sorted.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const double f = ev_target_cdf(target, sorted[i]);
    d = std::max({d, std::fabs(static_cast<double>(i + 1) / m - f), std::fabs(f - static_cast<double>(i) / m)});
  }
  return d;
}

EVComparison run(std::int64_t n, std::int64_t M, double alpha0, Sidedness sided, EvTarget target,
                 std::uint64_t seed, int threads, Interval interval) {
  if (n < 16) throw std::invalid_argument("normalized HC: n must be >= 16");
  if (M < 1) throw std::invalid_argument("normalized HC: M must be >= 1");
  const auto sdp = WeightFunction::sdp();
  auto results = map_replicates(static_cast<std::size_t>(M), threads, [&](std::size_t m) {
    RandomStream rng(seed, m);
    const auto u = uniform_sorted(n, rng);
    const SupLocation loc = sided == Sidedness::one ? sup_weighted_positive(u, sdp, interval)
                                                    : sup_weighted_absolute(u, sdp, interval);
    return std::pair<double, double>{ej_normalize(loc.value, n), loc.argmax_u};
  });
  EVComparison c;
  c.n = n;
  c.M = M;
  c.alpha0 = alpha0;
  c.sided = sided;
  c.target = target;
  c.seed = seed;
  for (const auto& [v, where] : results) {
    if (!std::isfinite(v)) throw std::runtime_error("normalized HC: non-finite replicate");
    c.normalized_values.push_back(v);
    c.argmax_u.push_back(where);
  }
  std::sort(c.normalized_values.begin(), c.normalized_values.end());
  c.ks_distance = ks_against(c.normalized_values, target);
  return c;
}

}  // namespace

double ev_target_cdf(EvTarget target, double x) { return std::exp(-target_weight(target) * std::exp(-x)); }

double ev_target_quantile(EvTarget target, double p) {
  if (!(p > 0.0 && p < 1.0)) throw std::domain_error("ev_target_quantile: p must lie in (0,1)");
  return -std::log(-std::log(p) / target_weight(target));
}

EVComparison simulate_normalized_hc(std::int64_t n, std::int64_t M, double alpha0, Sidedness sided,
                                    std::uint64_t seed, int threads) {
  if (!(alpha0 > 0.0 && alpha0 < 1.0)) throw std::invalid_argument("normalized HC: alpha0 must lie in (0,1)");
  const EvTarget target = sided == Sidedness::one ? EvTarget::one_sided_partial : EvTarget::two_sided_partial;
  return run(n, M, alpha0, sided, target, seed, threads, Interval{0.0, alpha0});
}

EVComparison simulate_normalized_hc_full(std::int64_t n, std::int64_t M, std::uint64_t seed, int threads) {
  return run(n, M, 1.0, Sidedness::one, EvTarget::one_sided_full, seed, threads, Interval{0.0, 1.0});
}

double ks_distance_two_sample(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.empty() || b.empty()) throw std::invalid_argument("ks_distance_two_sample: empty input");
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  std::size_t i = 0;
  std::size_t j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    const double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= x) ++i;
    while (j < b.size() && b[j] <= x) ++j;
    d = std::max(d, std::fabs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  return d;
}

double argmax_location_study(std::int64_t n, std::int64_t M, double alpha0, std::uint64_t seed,
                             const WeightFunction& weight, int threads) {
  if (!(alpha0 > 0.0 && alpha0 < 1.0)) throw std::invalid_argument("argmax study: alpha0 must lie in (0,1)");
  if (n < 1 || M < 1) throw std::invalid_argument("argmax study: n and M must be positive");
  const Interval window{0.0, 0.99};
  auto below = map_replicates(static_cast<std::size_t>(M), threads, [&](std::size_t m) {
    RandomStream rng(seed, m);
    const auto u = uniform_sorted(n, rng);
    return sup_weighted_positive(u, weight, window).argmax_u < alpha0 ? 1 : 0;
  });
  std::int64_t count = 0;
  for (int b : below) count += b;
  return static_cast<double>(count) / static_cast<double>(M);
}

std::string ev_comparison_to_json(const EVComparison& c) {
  nlohmann::json q = nlohmann::json::object();
  const auto& v = c.normalized_values;
  for (double p : {0.05, 0.1, 0.25, 0.5, 0.75, 0.9, 0.95}) {
    const auto idx = static_cast<std::size_t>(std::max(0.0, std::ceil(p * static_cast<double>(v.size())) - 1.0));
    char key[16];
    std::snprintf(key, sizeof key, "%.2f", p);
    q[key] = {{"empirical", v[std::min(idx, v.size() - 1)]}, {"target", ev_target_quantile(c.target, p)}};
  }
  nlohmann::json j = {{"n", c.n},
                      {"M", c.M},
                      {"alpha0", c.alpha0},
                      {"sided", std::string(to_string(c.sided))},
                      {"target", std::string(to_string(c.target))},
                      {"seed", c.seed},
                      {"ks_distance", c.ks_distance},
                      {"quantiles", q}};
  return j.dump(2) + "\n";
}

}  // namespace gof
