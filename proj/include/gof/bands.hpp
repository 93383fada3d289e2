#pragma once

#include "gof/statistics.hpp"
#include "gof/tabulation.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace gof {

enum class BandMethod { cscshm, ks, eicker_jaeschke };

std::string_view to_string(BandMethod m) noexcept;
BandMethod parse_band_method(std::string_view text);

struct BandPoint {
  double t = 0.0;
  double edf = 0.0;
  double lower = 0.0;
  double upper = 0.0;
  double half_width = 0.0;  // before clipping to [0,1]
};

// Simultaneous band for a continuous CDF on [X_(1), X_(n)). One point per
// distinct sample value in the domain; the bounds hold until the next point.
struct ConfidenceBand {
  BandMethod method = BandMethod::cscshm;
  double level = 0.95;
  double critical = 0.0;  // c_alpha, k_alpha or (b_n + x_alpha)/a_n
  std::vector<BandPoint> points;
  double domain_lo = 0.0;
  double domain_hi = 0.0;
};

struct CscshmBandOptions {
  // Two-sided table supplying c_alpha when alpha != 0.05.
  const QuantileTable* two_sided_table = nullptr;
  // Weight other than efkp_loglog; experimental, coverage not asserted.
  std::optional<WeightFunction> experimental_weight;
};

// F_n(t) -+ (c_alpha/sqrt(n)) q(F_n(t)), q = efkp_loglog, clipped to [0,1].
ConfidenceBand band_cscshm(const Sample& sample, double alpha, const CscshmBandOptions& options = {});

// F_n(t) -+ k_alpha/sqrt(n), clipped. k_0.05 = 1.35 as published; other
// levels invert the Kolmogorov series unless k_alpha is supplied.
ConfidenceBand band_ks(const Sample& sample, double alpha, std::optional<double> k_alpha = std::nullopt);

// F_n(t) -+ a_n^{-1}(b_n + x_alpha) sqrt(F_n(1 - F_n)/n), clipped; n >= 16.
ConfidenceBand band_eicker_jaeschke(const Sample& sample, double alpha);

ConfidenceBand build_band(const Sample& sample, BandMethod method, double alpha,
                          const CscshmBandOptions& options = {});

// K(x) = sum_k (-1)^k exp(-2 k^2 x^2), truncated at |k| <= 100.
double kolmogorov_cdf(double x);
// Root of K(x) = p by bisection.
double kolmogorov_quantile(double p);
// k_alpha: 1.35 at alpha = 0.05, otherwise kolmogorov_quantile(1 - alpha).
double ks_critical_value(double alpha);

// x_alpha = -log(-log(1 - alpha)/4).
double ej_x_alpha(double alpha);

struct EdfWidth {
  double edf = 0.0;
  double width = 0.0;  // upper - lower before clipping
};

std::vector<EdfWidth> band_width_profile(const ConfidenceBand& band);

struct CoverageResult {
  double coverage = 0.0;
  double stderr_ = 0.0;
  std::int64_t reps = 0;
};

// True when F stays inside the band on all of [X_(1), X_(n)): on each step
// [t_i, t_{i+1}) F runs from F(t_i) up to F(t_{i+1}-).
bool band_covers(const ConfidenceBand& band, const NullModel& truth);

// Fraction of replications whose band covers the true CDF, with the
// binomial standard error. Replicate r draws from substream (seed, r).
CoverageResult coverage_experiment(std::int64_t n, std::int64_t reps, const NullModel& truth,
                                   BandMethod method, double alpha, std::uint64_t seed,
                                   int threads = 0, const CscshmBandOptions& options = {});

std::string band_to_csv(const ConfidenceBand& band);

}  // namespace gof
