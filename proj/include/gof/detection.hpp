#pragma once

#include "gof/rng.hpp"
#include "gof/statistics.hpp"
#include "gof/tabulation.hpp"

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace gof {

enum class MixtureModel { normal, chisq };

std::string_view to_string(MixtureModel m) noexcept;
MixtureModel parse_mixture_model(std::string_view text);

// Sparse mixture (1 - eps) F_null + eps F_signal with
//   eps_n = n^-beta, mu_n = sqrt(2 r log n) (normal), delta_n = 2 r log n (chisq).
// r = 0 is accepted and gives the pure null.
struct MixtureConfig {
  MixtureModel model = MixtureModel::normal;
  int nu = 1;  // chisq degrees of freedom
  std::int64_t n = 10000;
  double beta = 0.6;
  double r = 0.6;

  void validate() const;
  double epsilon() const;
  double mu() const;
  double delta() const;
};

struct PowerResult {
  MixtureConfig config;
  double alpha = 0.05;
  std::int64_t reps = 0;
  double rejection_rate = 0.0;
  double stderr_ = 0.0;
  double critical_value_used = 0.0;
};

struct DetectionOutcome {
  bool reject = false;
  StatisticResult statistic;
  double critical = 0.0;
};

// Raised when a table does not describe the (weight, interval, one-sided) law
// of the statistic it is asked to calibrate.
class TableMismatch : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// rho(beta) = beta - 1/2 on (1/2, 3/4), (1 - sqrt(1 - beta))^2 on [3/4, 1).
double rho_detection_boundary(double beta);

// Each draw is a signal with probability eps_n (per-draw Bernoulli).
Sample sample_normal_mixture(const MixtureConfig& config, RandomStream& rng);
Sample sample_normal_mixture(const MixtureConfig& config, std::uint64_t seed);

// chi2_nu(delta) drawn as (Z + sqrt(delta))^2 + chi2_{nu-1}.
Sample sample_chisq_mixture(const MixtureConfig& config, RandomStream& rng);
Sample sample_chisq_mixture(const MixtureConfig& config, std::uint64_t seed);

Sample sample_mixture(const MixtureConfig& config, RandomStream& rng);

// Y_i = 1 - Phi(X_i) (normal) or S_i = 1 - H_{nu,0}(X_i) (chisq), sorted.
// Upper-tail signals land near 0.
Sample transform_mixture_to_uniform_null(const Sample& sample, MixtureModel model, int nu = 1);

// Throws TableMismatch unless table describes sup B/q over interval, one-sided.
void require_matching_table(const QuantileTable& table, const WeightFunction& q, Interval interval);

// Rejects when T_n^+(q, I) of the transformed sample reaches the (1 - alpha)
// table quantile.
DetectionOutcome run_detection_test(const Sample& sample, MixtureModel model, int nu,
                                    const WeightFunction& q, Interval interval, double alpha,
                                    const QuantileTable& table);

struct PowerOptions {
  WeightFunction weight = WeightFunction::efkp_loglog();
  Interval interval;
  int threads = 0;
};

// Monte Carlo rejection rates per grid point. Replicate r of grid point g
// draws from substream (seed, g, r).
std::vector<PowerResult> power_curve(const std::vector<MixtureConfig>& grid, double alpha,
                                     std::int64_t reps, const QuantileTable& table,
                                     std::uint64_t seed, const PowerOptions& options = {});

std::string power_curve_to_csv(const std::vector<PowerResult>& rows, bool with_boundary = true);

}  // namespace gof
