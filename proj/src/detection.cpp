#include "gof/detection.hpp"

#include "gof/parallel.hpp"
#include "gof/special_functions.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>

namespace gof {

std::string_view to_string(MixtureModel m) noexcept {
  return m == MixtureModel::normal ? "normal" : "chisq";
}

MixtureModel parse_mixture_model(std::string_view text) {
  if (text == "normal") return MixtureModel::normal;
  if (text == "chisq") return MixtureModel::chisq;
  throw std::invalid_argument("model must be 'normal' or 'chisq'");
}

void MixtureConfig::validate() const {
  if (n < 2) throw std::invalid_argument("mixture: n must be >= 2");
  if (!(beta > 0.5 && beta < 1.0)) throw std::invalid_argument("mixture: beta must lie in (1/2, 1)");
  if (!(r >= 0.0 && r < 1.0)) throw std::invalid_argument("mixture: r must lie in [0, 1)");
  if (model == MixtureModel::chisq && nu < 1) throw std::invalid_argument("mixture: nu must be >= 1");
}

double MixtureConfig::epsilon() const { return std::pow(static_cast<double>(n), -beta); }
double MixtureConfig::mu() const { return std::sqrt(2.0 * r * std::log(static_cast<double>(n))); }
double MixtureConfig::delta() const { return 2.0 * r * std::log(static_cast<double>(n)); }

double rho_detection_boundary(double beta) {
  if (!(beta > 0.5 && beta < 1.0)) throw std::domain_error("rho: beta must lie in (1/2, 1)");
  if (beta < 0.75) return beta - 0.5;
  const double s = 1.0 - std::sqrt(1.0 - beta);
  return s * s;
}

Sample sample_normal_mixture(const MixtureConfig& config, RandomStream& rng) {
  config.validate();
  if (config.model != MixtureModel::normal) throw std::invalid_argument("sample_normal_mixture: model is not normal");
  const double eps = config.epsilon();
  const double mu = config.mu();
  std::vector<double> x(static_cast<std::size_t>(config.n));
  for (auto& v : x) {
    const bool signal = rng.uniform_open() < eps;
    v = rng.normal() + (signal ? mu : 0.0);
  }
  return Sample(std::move(x));
}

Sample sample_normal_mixture(const MixtureConfig& config, std::uint64_t seed) {
  RandomStream rng(seed, 0);
  return sample_normal_mixture(config, rng);
}

Sample sample_chisq_mixture(const MixtureConfig& config, RandomStream& rng) {
  config.validate();
  if (config.model != MixtureModel::chisq) throw std::invalid_argument("sample_chisq_mixture: model is not chisq");
  const double eps = config.epsilon();
  const double root_delta = std::sqrt(config.delta());
  std::vector<double> x(static_cast<std::size_t>(config.n));
  for (auto& v : x) {
    const bool signal = rng.uniform_open() < eps;
    const double z = rng.normal() + (signal ? root_delta : 0.0);
    v = z * z + rng.chisq(config.nu - 1);
  }
  return Sample(std::move(x));
}

Sample sample_chisq_mixture(const MixtureConfig& config, std::uint64_t seed) {
  RandomStream rng(seed, 0);
  return sample_chisq_mixture(config, rng);
}

Sample sample_mixture(const MixtureConfig& config, RandomStream& rng) {
  return config.model == MixtureModel::normal ? sample_normal_mixture(config, rng)
                                              : sample_chisq_mixture(config, rng);
}

Sample transform_mixture_to_uniform_null(const Sample& sample, MixtureModel model, int nu) {
  if (model == MixtureModel::chisq && nu < 1) throw std::invalid_argument("transform: nu must be >= 1");
  std::vector<double> y;
  y.reserve(sample.size());
  // Survival functions keep full relative precision in the upper tail.
  for (double x : sample.values())
    y.push_back(model == MixtureModel::normal ? std_normal_sf(x) : chisq_sf(x, nu));
  // Clamp to the open unit interval; a draw beyond ~38 sigma would underflow.
  for (auto& v : y) v = std::clamp(v, std::numeric_limits<double>::min(), std::nextafter(1.0, 0.0));
  return Sample(std::move(y));
}

void require_matching_table(const QuantileTable& table, const WeightFunction& q, Interval interval) {
  if (!(table.weight() == q))
    throw TableMismatch("table weight " + table.weight().name() + " does not match statistic weight " + q.name());
  if (!(table.interval() == interval)) throw TableMismatch("table interval does not match statistic interval");
  if (table.sided() != Sidedness::one) throw TableMismatch("detection needs a one-sided table");
}

DetectionOutcome run_detection_test(const Sample& sample, MixtureModel model, int nu,
                                    const WeightFunction& q, Interval interval, double alpha,
                                    const QuantileTable& table) {
  require_matching_table(table, q, interval);
  const double crit = critical_value(table, alpha);
  const Sample u = transform_mixture_to_uniform_null(sample, model, nu);
  StatisticResult stat = sup_weighted_positive(u, q, interval);
  return {stat.value >= crit, std::move(stat), crit};
}

std::vector<PowerResult> power_curve(const std::vector<MixtureConfig>& grid, double alpha,
                                     std::int64_t reps, const QuantileTable& table,
                                     std::uint64_t seed, const PowerOptions& options) {
  if (reps < 1) throw std::invalid_argument("power_curve: reps must be >= 1");
  require_matching_table(table, options.weight, options.interval);
  const double crit = critical_value(table, alpha);
  std::vector<PowerResult> out;
  for (std::size_t g = 0; g < grid.size(); ++g) {
    const MixtureConfig& cfg = grid[g];
    cfg.validate();
    auto rejects = map_replicates(static_cast<std::size_t>(reps), options.threads, [&](std::size_t r) {
      RandomStream rng(seed, g, r);
      const Sample x = sample_mixture(cfg, rng);
      const Sample u = transform_mixture_to_uniform_null(x, cfg.model, cfg.nu);
      return sup_weighted_positive(u.values(), options.weight, options.interval).value >= crit ? 1 : 0;
    });
    std::int64_t count = 0;
    for (int v : rejects) count += v;
    PowerResult res;
    res.config = cfg;
    res.alpha = alpha;
    res.reps = reps;
    res.rejection_rate = static_cast<double>(count) / static_cast<double>(reps);
    res.stderr_ = std::sqrt(res.rejection_rate * (1.0 - res.rejection_rate) / static_cast<double>(reps));
    res.critical_value_used = crit;
    out.push_back(res);
  }
  return out;
}

std::string power_curve_to_csv(const std::vector<PowerResult>& rows, bool with_boundary) {
  std::string out = "model,nu,n,beta,r,alpha,reps,power,stderr";
  if (with_boundary) out += ",rho";
  out += '\n';
  char buf[64];
  auto num = [&](double v) {
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    out.append(buf, res.ptr);
  };
  for (const auto& row : rows) {
    const auto& c = row.config;
    out += to_string(c.model);
    out += ',' + std::to_string(c.model == MixtureModel::chisq ? c.nu : 0);
    out += ',' + std::to_string(c.n) + ',';
    num(c.beta);
    out += ',';
    num(c.r);
    out += ',';
    num(row.alpha);
    out += ',' + std::to_string(row.reps) + ',';
    num(row.rejection_rate);
    out += ',';
    num(row.stderr_);
    if (with_boundary) {
      out += ',';
      num(rho_detection_boundary(c.beta));
    }
    out += '\n';
  }
  return out;
}

}  // namespace gof
