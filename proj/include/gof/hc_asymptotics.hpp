#pragma once

#include "gof/statistics.hpp"
#include "gof/weights.hpp"

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace gof {

// Extreme-value targets for a_n sup - b_n of the SDP-weighted uniform process:
//   one_sided_partial   sup over (0, alpha0)       exp(-exp(-x)/2)
//   two_sided_partial   sup |.| over (0, alpha0)   exp(-exp(-x))
//   one_sided_full      sup over (0, 1)            exp(-2 exp(-x))
enum class EvTarget { one_sided_partial, two_sided_partial, one_sided_full };

std::string_view to_string(EvTarget t) noexcept;
double ev_target_cdf(EvTarget target, double x);
double ev_target_quantile(EvTarget target, double p);

struct EVComparison {
  std::int64_t n = 0;
  std::int64_t M = 0;
  double alpha0 = 0.0;
  Sidedness sided = Sidedness::one;
  EvTarget target = EvTarget::one_sided_partial;
  std::uint64_t seed = 0;
  std::vector<double> normalized_values;  // sorted
  std::vector<double> argmax_u;           // per replicate, in replicate order
  double ks_distance = 0.0;               // empirical law vs target
};

// M uniform samples of size n; replicate m uses substream (seed, m), so runs
// differing only in alpha0 share their data.
EVComparison simulate_normalized_hc(std::int64_t n, std::int64_t M, double alpha0, Sidedness sided,
                                    std::uint64_t seed, int threads = 0);

// Same with the full interval (0,1), one-sided, against exp(-2 exp(-x)).
EVComparison simulate_normalized_hc_full(std::int64_t n, std::int64_t M, std::uint64_t seed,
                                         int threads = 0);

// sup_x |F(x) - G(x)| between two empirical laws given as sorted vectors.
double ks_distance_two_sample(const std::vector<double>& a, const std::vector<double>& b);

// Fraction of replicates whose maximizer of the weighted one-sided sup over
// (0, 0.99) lies below alpha0.
double argmax_location_study(std::int64_t n, std::int64_t M, double alpha0, std::uint64_t seed,
                             const WeightFunction& weight = WeightFunction::sdp(), int threads = 0);

// {n, M, alpha0, sided, target, seed, ks_distance, quantiles:{...}}
std::string ev_comparison_to_json(const EVComparison& c);

}  // namespace gof
