#include "gof/tabulation.hpp"

#include "gof/parallel.hpp"
#include "gof/rng.hpp"

#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace gof {

void TabulationConfig::validate() const {
  if (n < 2) throw std::invalid_argument("tabulation: n must be >= 2");
  if (M < 1) throw std::invalid_argument("tabulation: M must be >= 1");
  interval.validate();
}

namespace {

// Precomputed lattice {k/n in (a,b)} with the per-point scale 1/(q(k/n) sqrt(n)).
class LatticeKernel {
 public:
  explicit LatticeKernel(const TabulationConfig& cfg)
      : n_(cfg.n), two_sided_(cfg.sided == Sidedness::two), innovation_(cfg.innovation), seed_(cfg.seed) {
    cfg.validate();
    const double nd = static_cast<double>(n_);
    std::int64_t lo = static_cast<std::int64_t>(std::floor(cfg.interval.a * nd));
    while (lo < 1 || !(static_cast<double>(lo) / nd > cfg.interval.a)) ++lo;
    std::int64_t hi = static_cast<std::int64_t>(std::ceil(cfg.interval.b * nd));
    while (hi > n_ - 1 || !(static_cast<double>(hi) / nd < cfg.interval.b)) --hi;
    if (lo > hi) throw std::invalid_argument("tabulation: interval contains no lattice point k/n");
    k_lo_ = lo;
    k_hi_ = hi;
    const double root_n = std::sqrt(nd);
    frac_.resize(static_cast<std::size_t>(k_hi_ - k_lo_ + 1));
    inv_scale_.resize(frac_.size());
    for (std::int64_t k = k_lo_; k <= k_hi_; ++k) {
      const double u = static_cast<double>(k) / nd;
      frac_[static_cast<std::size_t>(k - k_lo_)] = u;
      inv_scale_[static_cast<std::size_t>(k - k_lo_)] = 1.0 / (cfg.weight.evaluate_unchecked(u) * root_n);
    }
  }

  double evaluate(std::int64_t m) const {
    thread_local std::vector<double> partial;
    partial.resize(static_cast<std::size_t>(k_hi_ + 1));
    RandomStream rng(seed_, static_cast<std::uint64_t>(m));
    double s = 0.0;
    partial[0] = 0.0;
    for (std::int64_t k = 1; k <= n_; ++k) {
      s += draw(rng);
      if (k <= k_hi_) partial[static_cast<std::size_t>(k)] = s;
    }
    const double s_n = s;
    double best = -std::numeric_limits<double>::infinity();
    const std::size_t count = frac_.size();
    const double* sums = partial.data() + k_lo_;
    if (two_sided_) {
      for (std::size_t j = 0; j < count; ++j)
        best = std::max(best, std::fabs(sums[j] - frac_[j] * s_n) * inv_scale_[j]);
    } else {
      for (std::size_t j = 0; j < count; ++j)
        best = std::max(best, (sums[j] - frac_[j] * s_n) * inv_scale_[j]);
    }
    return best;
  }

 private:
  double draw(RandomStream& rng) const noexcept {
    return innovation_ == Innovation::normal ? rng.normal() : rng.exponential() - 1.0;
  }

  std::int64_t n_;
  bool two_sided_;
  Innovation innovation_;
  std::uint64_t seed_;
  std::int64_t k_lo_ = 1;
  std::int64_t k_hi_ = 1;
  std::vector<double> frac_;
  std::vector<double> inv_scale_;
};

constexpr int kLevels = 99;

}  // namespace

double simulate_limit_statistic(const TabulationConfig& config, std::int64_t replicate_index) {
  if (replicate_index < 0 || replicate_index >= config.M)
    throw std::out_of_range("simulate_limit_statistic: replicate index outside [0, M)");
  return LatticeKernel(config).evaluate(replicate_index);
}

QuantileTable table_from_values(std::vector<double> values, const TabulationConfig& config) {
  if (values.empty()) throw std::invalid_argument("table_from_values: no values");
  std::sort(values.begin(), values.end());
  QuantileTable t;
  t.tag = "simulated";
  t.config = config;
  const auto M = static_cast<std::int64_t>(values.size());
  t.points.reserve(kLevels);
  for (int k = 1; k <= kLevels; ++k) {
    // Smallest x with G_{n,M}(x) >= k/100.
    const std::int64_t idx = (k * M + 99) / 100 - 1;
    t.points.push_back({values[static_cast<std::size_t>(std::max<std::int64_t>(idx, 0))], k / 100.0});
  }
  t.summary = {values.front(), values.back(), M};
  t.raw_sorted = std::move(values);
  return t;
}

QuantileTable tabulate(const TabulationConfig& config, int threads) {
  const LatticeKernel kernel(config);
  auto values = map_replicates(static_cast<std::size_t>(config.M), threads,
                               [&kernel](std::size_t m) { return kernel.evaluate(static_cast<std::int64_t>(m)); });
  return table_from_values(std::move(values), config);
}

QuantileTable tabulate_serial(const TabulationConfig& config) {
  const LatticeKernel kernel(config);
  auto values = map_replicates_serial(static_cast<std::size_t>(config.M),
                                      [&kernel](std::size_t m) { return kernel.evaluate(static_cast<std::int64_t>(m)); });
  return table_from_values(std::move(values), config);
}

const QuantileTable& published_table() {
  static const QuantileTable table = [] {
    static constexpr double x[kLevels] = {
        0.74, 0.87, 0.95, 1.02, 1.07, 1.11, 1.16, 1.19, 1.23, 1.26, 1.29, 1.32, 1.35, 1.37, 1.40,
        1.42, 1.45, 1.47, 1.49, 1.51, 1.54, 1.56, 1.58, 1.60, 1.63, 1.65, 1.67, 1.69, 1.71, 1.73,
        1.75, 1.77, 1.79, 1.81, 1.83, 1.85, 1.87, 1.89, 1.91, 1.93, 1.95, 1.97, 1.99, 2.01, 2.03,
        2.05, 2.07, 2.09, 2.12, 2.14, 2.16, 2.18, 2.20, 2.22, 2.25, 2.27, 2.30, 2.32, 2.35, 2.37,
        2.40, 2.43, 2.46, 2.49, 2.51, 2.54, 2.57, 2.60, 2.63, 2.66, 2.69, 2.72, 2.76, 2.79, 2.83,
        2.87, 2.91, 2.95, 2.99, 3.03, 3.08, 3.13, 3.18, 3.23, 3.29, 3.35, 3.42, 3.48, 3.55, 3.62,
        3.70, 3.79, 3.89, 4.00, 4.14, 4.30, 4.48, 4.73, 5.16};
    QuantileTable t;
    t.tag = "published-table";
    for (int k = 0; k < kLevels; ++k) t.points.push_back({x[k], (k + 1) / 100.0});
    t.summary = {x[0], x[kLevels - 1], 50000};
    return t;
  }();
  return table;
}

double QuantileTable::cdf(double x) const {
  if (!raw_sorted.empty()) {
    const auto it = std::upper_bound(raw_sorted.begin(), raw_sorted.end(), x);
    return static_cast<double>(it - raw_sorted.begin()) / static_cast<double>(raw_sorted.size());
  }
  if (points.empty()) throw std::logic_error("QuantileTable::cdf on an empty table");
  if (x <= points.front().x) return points.front().G;
  if (x >= points.back().x) return points.back().G;
  const auto it = std::upper_bound(points.begin(), points.end(), x,
                                   [](double v, const QuantilePoint& p) { return v < p.x; });
  const auto& hi = *it;
  const auto& lo = *(it - 1);
  if (hi.x == lo.x) return hi.G;
  return lo.G + (x - lo.x) / (hi.x - lo.x) * (hi.G - lo.G);
}

double QuantileTable::quantile(double p) const {
  if (points.empty()) throw std::logic_error("QuantileTable::quantile on an empty table");
  constexpr double kSnap = 1e-12;
  for (const auto& pt : points)
    if (std::fabs(pt.G - p) <= kSnap) return pt.x;
  if (p < points.front().G || p > points.back().G) {
    if (!raw_sorted.empty()) {
      const auto M = static_cast<double>(raw_sorted.size());
      const auto idx = static_cast<std::size_t>(std::max(0.0, std::ceil(p * M) - 1.0));
      return raw_sorted[std::min(idx, raw_sorted.size() - 1)];
    }
    throw std::out_of_range("quantile level outside the table's range");
  }
  const auto it = std::upper_bound(points.begin(), points.end(), p,
                                   [](double v, const QuantilePoint& pt) { return v < pt.G; });
  const auto& hi = *it;
  const auto& lo = *(it - 1);
  return lo.x + (p - lo.G) / (hi.G - lo.G) * (hi.x - lo.x);
}

WeightFunction QuantileTable::weight() const {
  return config ? config->weight : WeightFunction::efkp_loglog();
}

Interval QuantileTable::interval() const { return config ? config->interval : Interval{0.0, 1.0}; }

Sidedness QuantileTable::sided() const { return config ? config->sided : Sidedness::one; }

double critical_value(const QuantileTable& table, double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw std::domain_error("critical_value: alpha must lie in (0,1)");
  return table.quantile(1.0 - alpha);
}

double two_sided_critical_value(double alpha, const QuantileTable* two_sided_table) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw std::domain_error("two_sided_critical_value: alpha must lie in (0,1)");
  if (two_sided_table) {
    if (two_sided_table->sided() != Sidedness::two)
      throw std::invalid_argument("two_sided_critical_value: table is not two-sided");
    return critical_value(*two_sided_table, alpha);
  }
  if (std::fabs(alpha - 0.05) <= 1e-12) return kTwoSidedC005;
  throw std::invalid_argument("two_sided_critical_value: only alpha = 0.05 is embedded; supply a two-sided table");
}

// ---------------------------------------------------------------------------
// Persistence

std::string table_to_json(const QuantileTable& table) {
  nlohmann::json j;
  j["schema_version"] = 1;
  j["tag"] = table.tag;
  if (table.config) {
    const auto& c = *table.config;
    nlohmann::json params = nlohmann::json::array();
    if (auto p = c.weight.parameter()) params.push_back(*p);
    std::string weight_name = c.weight.name().substr(0, c.weight.name().find(':'));
    j["config"] = {{"n", c.n},
                   {"M", c.M},
                   {"weight_name", weight_name},
                   {"weight_params", params},
                   {"a", c.interval.a},
                   {"b", c.interval.b},
                   {"sided", std::string(to_string(c.sided))},
                   {"seed", c.seed}};
    if (c.innovation != Innovation::normal) j["config"]["innovation"] = "centered-exponential";
  } else {
    j["config"] = nullptr;
  }
  nlohmann::json q = nlohmann::json::array();
  for (const auto& p : table.points) q.push_back({p.x, p.G});
  j["quantiles"] = q;
  j["raw_summary"] = {{"min", table.summary.min}, {"max", table.summary.max}, {"count", table.summary.count}};
  return j.dump(2) + "\n";
}

QuantileTable table_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error(std::string("table JSON: ") + e.what());
  }
  try {
    if (j.at("schema_version").get<int>() != 1) throw std::runtime_error("table JSON: unsupported schema_version");
    QuantileTable t;
    t.tag = j.value("tag", std::string("simulated"));
    if (t.tag == "published-table") return published_table();
    const auto& c = j.at("config");
    if (!c.is_null()) {
      TabulationConfig cfg;
      cfg.n = c.at("n").get<std::int64_t>();
      cfg.M = c.at("M").get<std::int64_t>();
      std::string wname = c.at("weight_name").get<std::string>();
      const auto& params = c.at("weight_params");
      if (!params.empty()) {
        char buf[64];
        auto res = std::to_chars(buf, buf + sizeof buf, params.at(0).get<double>());
        wname += ":" + std::string(buf, res.ptr);
      }
      cfg.weight = WeightFunction::parse(wname);
      cfg.interval = {c.at("a").get<double>(), c.at("b").get<double>()};
      cfg.sided = parse_sidedness(c.at("sided").get<std::string>());
      cfg.seed = c.at("seed").get<std::uint64_t>();
      if (c.value("innovation", std::string("normal")) == "centered-exponential")
        cfg.innovation = Innovation::centered_exponential;
      cfg.validate();
      t.config = cfg;
    }
    for (const auto& row : j.at("quantiles")) t.points.push_back({row.at(0).get<double>(), row.at(1).get<double>()});
    for (std::size_t i = 1; i < t.points.size(); ++i)
      if (t.points[i].x < t.points[i - 1].x || t.points[i].G < t.points[i - 1].G)
        throw std::runtime_error("table JSON: quantiles are not monotone");
    const auto& s = j.at("raw_summary");
    t.summary = {s.at("min").get<double>(), s.at("max").get<double>(), s.at("count").get<std::int64_t>()};
    return t;
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error(std::string("table JSON: ") + e.what());
  }
}

std::string raw_sidecar_path(const std::string& table_path) { return table_path + ".raw.csv"; }

void save_table(const QuantileTable& table, const std::string& path, bool with_raw_sidecar) {
  {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write table file '" + path + "'");
    out << table_to_json(table);
    if (!out) throw std::runtime_error("failed writing table file '" + path + "'");
  }
  if (with_raw_sidecar && !table.raw_sorted.empty()) {
    std::ofstream out(raw_sidecar_path(path), std::ios::binary);
    if (!out) throw std::runtime_error("cannot write raw sidecar for '" + path + "'");
    char buf[64];
    for (double v : table.raw_sorted) {
      auto res = std::to_chars(buf, buf + sizeof buf, v);
      out.write(buf, res.ptr - buf);
      out.put('\n');
    }
  }
}

QuantileTable load_table(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open table file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  QuantileTable t = table_from_json(ss.str());
  const std::string raw = raw_sidecar_path(path);
  if (std::filesystem::exists(raw)) {
    std::ifstream rin(raw);
    std::string line;
    while (std::getline(rin, line)) {
      if (line.empty()) continue;
      double v = 0.0;
      auto res = std::from_chars(line.data(), line.data() + line.size(), v);
      if (res.ec != std::errc()) throw std::runtime_error("bad value in raw sidecar '" + raw + "'");
      t.raw_sorted.push_back(v);
    }
    if (!std::is_sorted(t.raw_sorted.begin(), t.raw_sorted.end()))
      throw std::runtime_error("raw sidecar '" + raw + "' is not sorted");
  }
  return t;
}

}  // namespace gof
