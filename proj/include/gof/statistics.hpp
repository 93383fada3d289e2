#pragma once

#include "gof/weights.hpp"

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace gof {

// Sorted, finite, nonempty sample.
class Sample {
 public:
  // Sorts the values; throws std::invalid_argument on empty or non-finite input.
  explicit Sample(std::vector<double> values);

  std::span<const double> values() const noexcept { return values_; }
  std::size_t size() const noexcept { return values_.size(); }
  double operator[](std::size_t i) const noexcept { return values_[i]; }
  double front() const noexcept { return values_.front(); }
  double back() const noexcept { return values_.back(); }

 private:
  std::vector<double> values_;
};

enum class NullKind { uniform01, normal, exponential, chisq, user_table, custom };

// Continuous null CDF F0, strictly increasing on its support.
class NullModel {
 public:
  static NullModel uniform01();
  static NullModel normal(double mu, double sigma);
  static NullModel exponential(double lambda);
  static NullModel chisq(double nu);
  // Piecewise-linear CDF through (t, F) knots; F strictly increasing from 0 to 1.
  static NullModel user_table(std::vector<std::pair<double, double>> knots);
  // Library-only escape hatch. cdf must be continuous and strictly increasing
  // on (lo, hi); quantile is optional and only needed for sampling.
  static NullModel custom(std::string name, std::function<double(double)> cdf, double lo, double hi,
                          std::function<double(double)> quantile = {});

  // Parses uniform | normal:MU,SIGMA | exponential:LAMBDA | chisq:NU | table:PATH.
  static NullModel parse(std::string_view text);

  NullKind kind() const noexcept { return kind_; }
  const std::string& name() const noexcept { return name_; }

  // F0(t). Throws std::domain_error when t lies outside the support.
  double cdf(double t) const;
  // F0^{-1}(p) for 0 < p < 1.
  double quantile(double p) const;
  bool in_support(double t) const noexcept;

 private:
  NullModel() = default;

  NullKind kind_ = NullKind::uniform01;
  std::string name_;
  double p1_ = 0.0;
  double p2_ = 1.0;
  double lo_ = 0.0;
  double hi_ = 1.0;
  std::vector<std::pair<double, double>> knots_;
  std::function<double(double)> cdf_;
  std::function<double(double)> quantile_;
};

struct Interval {
  double a = 0.0;
  double b = 1.0;

  void validate() const;  // 0 <= a < b <= 1
  friend bool operator==(const Interval&, const Interval&) = default;
};

enum class Sidedness { one, two };

enum class StatisticFamily {
  cscshm_two_sided,
  cscshm_one_sided,
  cscshm_hat_two_sided,
  cscshm_hat_one_sided,
  hc,
  hc_plus,
  hc_star,
  ks_two_sided,
};

std::string_view to_string(StatisticFamily f) noexcept;
StatisticFamily parse_family(std::string_view text);
std::string_view to_string(Sidedness s) noexcept;
Sidedness parse_sidedness(std::string_view text);

struct StatisticDescriptor {
  StatisticFamily family = StatisticFamily::cscshm_one_sided;
  std::optional<WeightFunction> weight;  // required for the cscshm families
  Interval interval;
  double alpha0 = 0.5;                   // HC family only

  void validate() const;
};

struct StatisticResult {
  double value = 0.0;
  double argmax_u = 0.0;  // maximizing location in uniform scale
  StatisticDescriptor descriptor;
};

// Location and value of a weighted supremum in uniform scale.
struct SupLocation {
  double value = 0.0;
  double argmax_u = 0.0;
};

// u_i = F0(x_i), sorted. Throws std::domain_error if a point falls outside
// the support or maps onto 0 or 1.
Sample transform_to_uniform(const Sample& sample, const NullModel& null);

// sup over u in (a,b) of sqrt(n)(G_n(u) - u)/q(u). Exact up to a 1e-10
// search width: candidates are the jump points, their left limits, the
// one-sided limits at a and b, and an interior maximizer per constancy piece.
SupLocation sup_weighted_positive(std::span<const double> u_sorted, const WeightFunction& q,
                                  Interval interval);
// As above with |G_n(u) - u| in the numerator.
SupLocation sup_weighted_absolute(std::span<const double> u_sorted, const WeightFunction& q,
                                  Interval interval);

// Hat variant: the process is divided by q(G_n(u)), with the ratio taken as
// 0 where G_n(u) is 0 or 1.
SupLocation sup_weighted_hat(std::span<const double> u_sorted, const WeightFunction& q,
                             Interval interval, Sidedness sided);

// sqrt(n) sup |G_n(u) - u| over (0,1).
SupLocation sup_ks(std::span<const double> u_sorted);

StatisticResult sup_weighted_positive(const Sample& u_sorted, const WeightFunction& q, Interval interval);
StatisticResult sup_weighted_absolute(const Sample& u_sorted, const WeightFunction& q, Interval interval);

// Evaluates a descriptor on raw data under a null model.
StatisticResult statistic(const Sample& sample, const NullModel& null, const StatisticDescriptor& d);
// Same, on data already in uniform scale.
StatisticResult statistic_uniform(std::span<const double> u_sorted, const StatisticDescriptor& d);

struct EjConstants {
  double a_n = 0.0;
  double b_n = 0.0;
};

// a_n = sqrt(2 log log n), b_n = 2 log log n + (1/2) log log log n - (1/2) log(4 pi).
// Requires n >= 16.
EjConstants ej_constants(long long n);
double ej_normalize(double value, long long n);

}  // namespace gof
