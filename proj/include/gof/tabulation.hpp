#pragma once

#include "gof/statistics.hpp"
#include "gof/weights.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace gof {

// Innovations driving the partial-sum process. Any law with a finite second
// moment works once standardized; centered Exp(1) has unit variance.
enum class Innovation { normal, centered_exponential };

struct TabulationConfig {
  std::int64_t n = 50000;  // lattice size
  std::int64_t M = 50000;  // replications
  WeightFunction weight = WeightFunction::efkp_loglog();
  Interval interval;
  Sidedness sided = Sidedness::one;
  std::uint64_t seed = 20240601;
  Innovation innovation = Innovation::normal;

  void validate() const;
};

struct QuantilePoint {
  double x = 0.0;
  double G = 0.0;
};

struct RawSummary {
  double min = 0.0;
  double max = 0.0;
  std::int64_t count = 0;
};

// Monotone CDF grid for a null limit law. Tables produced by tabulate()
// carry the generating config and the sorted simulated values; the embedded
// reference table carries only its tag.
struct QuantileTable {
  std::vector<QuantilePoint> points;  // sorted in x, G nondecreasing
  std::optional<TabulationConfig> config;
  std::string tag;                    // "published-table" or "simulated"
  std::vector<double> raw_sorted;     // may be empty (e.g. loaded without sidecar)
  RawSummary summary;

  // Empirical CDF of the raw values when present, otherwise linear
  // interpolation of the grid, clamped to the grid's G range.
  double cdf(double x) const;
  // Linear interpolation of x against G. Throws std::out_of_range for p
  // outside the grid's G range.
  double quantile(double p) const;

  // The (weight, interval, sidedness) law this table describes.
  WeightFunction weight() const;
  Interval interval() const;
  Sidedness sided() const;
};

// Lattice evaluation of one replicate: n innovations from substream
// (seed, replicate_index), partial sums S_k, and
//   max over k/n in (a,b) of (S_k - (k/n) S_n) / (sigma q(k/n) sqrt(n))
// with the absolute value inside for two-sided tables.
double simulate_limit_statistic(const TabulationConfig& config, std::int64_t replicate_index);

// OpenMP tabulation. Bit-identical for every thread count.
QuantileTable tabulate(const TabulationConfig& config, int threads = 0);

// Single-threaded reference with the same output; kept for testing.
QuantileTable tabulate_serial(const TabulationConfig& config);

// Builds a table from simulated values (sorted here).
QuantileTable table_from_values(std::vector<double> values, const TabulationConfig& config);

// Percentage points of sup B(u)/q(u) over (0,1), q = efkp_loglog, as
// published (n = M = 50,000; 99 points at G = 0.01..0.99).
const QuantileTable& published_table();

// (1 - alpha) quantile of the table. Throws std::domain_error unless 0 < alpha < 1.
double critical_value(const QuantileTable& table, double alpha);

// c_alpha of sup |B(u)|/q(u), q = efkp_loglog over (0,1). alpha = 0.05 uses
// the published constant 4.57; other levels need a two-sided table.
double two_sided_critical_value(double alpha, const QuantileTable* two_sided_table = nullptr);

inline constexpr double kTwoSidedC005 = 4.57;

// JSON persistence (schema_version 1) plus an optional raw-values sidecar.
std::string table_to_json(const QuantileTable& table);
QuantileTable table_from_json(const std::string& text);
void save_table(const QuantileTable& table, const std::string& path, bool with_raw_sidecar = false);
QuantileTable load_table(const std::string& path);
std::string raw_sidecar_path(const std::string& table_path);

}  // namespace gof
