// Acceptance run: one PASS/FAIL line per criterion. Tolerances are fixed
// below. Pass criterion numbers as arguments to run a subset.

#include "gof/bands.hpp"
#include "gof/detection.hpp"
#include "gof/hc_asymptotics.hpp"
#include "gof/rng.hpp"
#include "gof/special_functions.hpp"
#include "gof/statistics.hpp"
#include "gof/tabulation.hpp"
#include "gof/weights.hpp"

#include "oracles.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <functional>
#include <set>
#include <string>
#include <vector>

namespace {

// Criterion 1
constexpr double kPubCentralTol = 0.01;
constexpr double kPubQ95 = 4.14, kPubQ95Tol = 0.08;
constexpr double kPubQ99 = 5.16, kPubQ99Tol = 0.20;
constexpr double kPubQ90 = 3.62, kPubQ90Tol = 0.06;
// Criterion 2
constexpr double kTwoSidedC = 4.57, kTwoSidedTol = 0.10;
// Criterion 3
constexpr double kDistFreeTol = 1e-12;
// Criterion 4
constexpr double kOracleRelTol = 1e-6;
constexpr std::size_t kOracleGrid = 1000000;
// Criterion 5
constexpr double kAlpha0KsMax = 0.10;
constexpr double kArgmaxMinFraction = 0.80;
// Criterion 6
constexpr double kCsCoverageLo = 0.92, kCsCoverageHi = 0.99;
constexpr double kKsCoverageLo = 0.93, kKsCoverageHi = 0.995;
// Criterion 7
constexpr double kNormalPowerMin = 0.80;
constexpr double kNullRateLo = 0.03, kNullRateHi = 0.08;
constexpr double kChisqPowerMin = 0.65;
constexpr std::int64_t kNullDiagReps = 20000;

constexpr std::int64_t kBigN = 50000;
constexpr std::int64_t kBigM = 50000;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

gof::TabulationConfig big_config(gof::Sidedness sided) {
  gof::TabulationConfig c;
  c.n = kBigN;
  c.M = kBigM;
  c.sided = sided;
  return c;
}

Outcome criterion1() {
  const auto t = gof::tabulate(big_config(gof::Sidedness::one), 0);
  const auto& pub = gof::published_table();
  double worst = 0.0, worst_x = 0.0;
  for (const auto& p : pub.points) {
    if (p.x < 1.0 || p.x > 3.0) continue;
    const double d = std::fabs(t.cdf(p.x) - p.G);
    if (d > worst) {
      worst = d;
      worst_x = p.x;
    }
  }
  const double q90 = t.quantile(0.90), q95 = t.quantile(0.95), q99 = t.quantile(0.99);
  Outcome o;
  o.pass = worst <= kPubCentralTol && std::fabs(q95 - kPubQ95) <= kPubQ95Tol &&
           std::fabs(q99 - kPubQ99) <= kPubQ99Tol && std::fabs(q90 - kPubQ90) <= kPubQ90Tol;
  o.detail = "max|G_sim-G_pub| on [1,3] = " + fmt("%.4f", worst) + " at x=" + fmt("%.2f", worst_x) +
             " (tol 0.01); q90=" + fmt("%.3f", q90) + " q95=" + fmt("%.3f", q95) + " q99=" + fmt("%.3f", q99);
  return o;
}

Outcome criterion2() {
  const auto t = gof::tabulate(big_config(gof::Sidedness::two), 0);
  const double c = gof::two_sided_critical_value(0.05, &t);
  Outcome o;
  o.pass = std::fabs(c - kTwoSidedC) <= kTwoSidedTol;
  o.detail = "c_0.05 = " + fmt("%.3f", c) + " (target 4.57 +- 0.10)";
  return o;
}

std::vector<gof::WeightFunction> builtin_weights() {
  return {gof::WeightFunction::efkp_loglog(), gof::WeightFunction::sdp(),
          gof::WeightFunction::chibisov_oreilly(0.25), gof::WeightFunction::loglog_power(0.5)};
}

const gof::StatisticFamily kAllFamilies[] = {
    gof::StatisticFamily::cscshm_two_sided, gof::StatisticFamily::cscshm_one_sided,
    gof::StatisticFamily::cscshm_hat_two_sided, gof::StatisticFamily::cscshm_hat_one_sided,
    gof::StatisticFamily::hc, gof::StatisticFamily::hc_plus,
    gof::StatisticFamily::hc_star, gof::StatisticFamily::ks_two_sided};

bool needs_weight(gof::StatisticFamily f) {
  using F = gof::StatisticFamily;
  return f == F::cscshm_two_sided || f == F::cscshm_one_sided || f == F::cscshm_hat_two_sided ||
         f == F::cscshm_hat_one_sided;
}

Outcome criterion3() {
  gof::RandomStream rng(3, 0);
  const auto weights = builtin_weights();
  double worst = 0.0;
  int evaluated = 0;
  for (int pair = 0; pair < 100; ++pair) {
    const std::size_t n = 5 + rng.next_u64() % 196;
    std::vector<double> x(n);
    gof::NullModel null = gof::NullModel::uniform01();
    switch (pair % 4) {
      case 0: {
        const double mu = 4.0 * rng.uniform_open() - 2.0, sigma = 0.5 + 2.0 * rng.uniform_open();
        null = gof::NullModel::normal(mu, sigma);
        for (auto& v : x) v = mu + sigma * rng.normal();
        break;
      }
      case 1: {
        const double lambda = 0.2 + 3.0 * rng.uniform_open();
        null = gof::NullModel::exponential(lambda);
        for (auto& v : x) v = rng.exponential() / lambda;
        break;
      }
      case 2: {
        const int nu = 1 + static_cast<int>(rng.next_u64() % 6);
        null = gof::NullModel::chisq(nu);
        for (auto& v : x) v = rng.chisq(nu);
        break;
      }
      default: {
        null = gof::NullModel::user_table({{-1.0, 0.0}, {0.0, 0.3}, {2.0, 0.9}, {5.0, 1.0}});
        for (auto& v : x) v = null.quantile(rng.uniform_open());
        break;
      }
    }
    const gof::Sample sample(x);
    const gof::Sample u = gof::transform_to_uniform(sample, null);
    for (auto f : kAllFamilies) {
      gof::StatisticDescriptor d;
      d.family = f;
      d.alpha0 = 0.5;
      if (needs_weight(f)) d.weight = weights[static_cast<std::size_t>(pair) % weights.size()];
      if (f == gof::StatisticFamily::hc_plus && 1.0 / static_cast<double>(n) >= d.alpha0) continue;
      const double a = gof::statistic(sample, null, d).value;
      const double b = gof::statistic(u, gof::NullModel::uniform01(), d).value;
      worst = std::max(worst, std::fabs(a - b));
      ++evaluated;
    }
  }
  Outcome o;
  o.pass = worst <= kDistFreeTol;
  o.detail = "max |T(X,F0) - T(F0(X),U)| = " + fmt("%.3g", worst) + " over " + std::to_string(evaluated) +
             " evaluations (tol 1e-12)";
  return o;
}

Outcome criterion4() {
  gof::RandomStream rng(4, 0);
  const auto weights = builtin_weights();
  double worst = 0.0;
  int evaluated = 0;
  std::string worst_case;
  for (int s = 0; s < 200; ++s) {
    const std::size_t n = 1 + rng.next_u64() % 50;
    std::vector<double> u(n);
    for (auto& v : u) v = rng.uniform_open();
    std::sort(u.begin(), u.end());
    // Every other sample uses a random subinterval for the weighted families.
    gof::Interval iv{};
    if (s % 2) {
      const double p = rng.uniform_open(), q = rng.uniform_open();
      iv = {std::min(p, q) * 0.5, 0.5 + std::max(p, q) * 0.5};
    }
    const double alpha0 = 0.1 + 0.8 * rng.uniform_open();
    for (auto f : kAllFamilies) {
      const std::size_t nw = needs_weight(f) ? weights.size() : 1;
      for (std::size_t w = 0; w < nw; ++w) {
        gof::StatisticDescriptor d;
        d.family = f;
        d.alpha0 = alpha0;
        if (needs_weight(f)) {
          d.weight = weights[w];
          d.interval = iv;
        }
        if (f == gof::StatisticFamily::hc_plus && 1.0 / static_cast<double>(n) >= alpha0) continue;
        if (f == gof::StatisticFamily::hc_star && std::floor(alpha0 * static_cast<double>(n)) < 1) continue;
        const double lib = gof::statistic_uniform(u, d).value;
        const double ref = oracle::brute_force_statistic(u, d, kOracleGrid);
        const double rel = std::fabs(lib - ref) / std::max(1.0, std::fabs(ref));
        ++evaluated;
        if (rel > worst) {
          worst = rel;
          worst_case = std::string(gof::to_string(f)) + (d.weight ? " " + d.weight->name() : "") +
                       " n=" + std::to_string(n);
        }
      }
    }
  }
  Outcome o;
  o.pass = worst <= kOracleRelTol;
  o.detail = "max relative gap = " + fmt("%.3g", worst) + " over " + std::to_string(evaluated) +
             " evaluations (tol 1e-6)" + (worst_case.empty() ? "" : "; worst: " + worst_case);
  return o;
}

Outcome criterion5() {
  constexpr std::int64_t n = 100000, M = 2000;
  constexpr std::uint64_t seed = 5;
  const auto a = gof::simulate_normalized_hc(n, M, 0.1, gof::Sidedness::one, seed, 0);
  const auto b = gof::simulate_normalized_hc(n, M, 0.9, gof::Sidedness::one, seed + 1, 0);
  const double ks = gof::ks_distance_two_sample(a.normalized_values, b.normalized_values);
  const double frac = gof::argmax_location_study(n, M, 0.1, seed + 2);
  const double median = a.normalized_values[a.normalized_values.size() / 2];
  Outcome o;
  o.pass = ks <= kAlpha0KsMax && frac >= kArgmaxMinFraction;
  o.detail = "KS(alpha0=0.1 vs 0.9) = " + fmt("%.4f", ks) + " (max 0.10); argmax below 0.1 in " +
             fmt("%.4f", frac) + " of replications (min 0.80); median(alpha0=0.1) = " + fmt("%.3f", median) +
             " vs limit " + fmt("%.3f", gof::ev_target_quantile(gof::EvTarget::one_sided_partial, 0.5));
  return o;
}

Outcome criterion6() {
  const auto truth = gof::NullModel::uniform01();
  const auto cs = gof::coverage_experiment(100, 2000, truth, gof::BandMethod::cscshm, 0.05, 6, 0);
  const auto ks = gof::coverage_experiment(100, 2000, truth, gof::BandMethod::ks, 0.05, 6, 0);
  // Width at edf = 0.01 on any n = 100 sample with distinct values.
  std::vector<double> x;
  for (int i = 1; i <= 100; ++i) x.push_back(i);
  const gof::Sample s(x);
  const double w_cs = gof::band_width_profile(gof::band_cscshm(s, 0.05)).front().width;
  const double w_ks = gof::band_width_profile(gof::band_ks(s, 0.05)).front().width;
  Outcome o;
  o.pass = cs.coverage >= kCsCoverageLo && cs.coverage <= kCsCoverageHi && ks.coverage >= kKsCoverageLo &&
           ks.coverage <= kKsCoverageHi && w_cs < w_ks;
  o.detail = "coverage cscshm = " + fmt("%.4f", cs.coverage) + " [0.92,0.99], ks = " + fmt("%.4f", ks.coverage) +
             " [0.93,0.995]; width at edf 0.01: cscshm " + fmt("%.5f", w_cs) + " < ks " + fmt("%.5f", w_ks);
  return o;
}

Outcome criterion7() {
  const auto& table = gof::published_table();
  auto cfg = [](gof::MixtureModel m, int nu, double r) {
    gof::MixtureConfig c;
    c.model = m;
    c.nu = nu;
    c.n = 10000;
    c.beta = 0.6;
    c.r = r;
    return c;
  };
  const auto rows = gof::power_curve({cfg(gof::MixtureModel::normal, 1, 0.6), cfg(gof::MixtureModel::normal, 1, 0.0),
                                      cfg(gof::MixtureModel::chisq, 2, 0.6)},
                                     0.05, 500, table, 7);
  const double power = rows[0].rejection_rate, null_rate = rows[1].rejection_rate, chi = rows[2].rejection_rate;
  Outcome o;
  o.pass = power >= kNormalPowerMin && null_rate >= kNullRateLo && null_rate <= kNullRateHi && chi >= kChisqPowerMin;
  o.detail = "critical " + fmt("%.2f", rows[0].critical_value_used) + "; normal power = " + fmt("%.3f", power) +
             " (min 0.80); null rate = " + fmt("%.3f", null_rate) + " [0.03,0.08]; chisq(2) power = " +
             fmt("%.3f", chi) + " (min 0.65)";
  // Diagnostic only, not part of the verdict: the null rate with a much
  // smaller standard error, to separate calibration from Monte Carlo noise.
  const auto precise = gof::power_curve({cfg(gof::MixtureModel::normal, 1, 0.0)}, 0.05, kNullDiagReps, table, 11);
  o.detail += "; diagnostic null rate at " + std::to_string(kNullDiagReps) + " reps = " +
              fmt("%.4f", precise[0].rejection_rate) + " (se " + fmt("%.4f", precise[0].stderr_) + ")";
  return o;
}

Outcome criterion8() {
  using gof::ProbeVerdict;
  const auto ll = gof::WeightFunction::efkp_loglog();
  const auto sdp = gof::WeightFunction::sdp();
  const auto co = gof::WeightFunction::chibisov_oreilly(0.25);
  std::string detail;
  bool pass = true;
  auto expect = [&](const gof::WeightFunction& q, double c, ProbeVerdict want) {
    const auto p = gof::integral_I(q, c);
    const bool ok = p.verdict == want;
    pass &= ok;
    detail += q.name() + "@" + fmt("%g", c) + "=" + std::string(gof::to_string(p.verdict)) + (ok ? "" : "(!)") + " ";
  };
  expect(ll, 2.0, ProbeVerdict::converged);
  expect(ll, 0.5, ProbeVerdict::diverging);
  for (double c : {0.5, 1.0, 2.0, 4.0}) expect(sdp, c, ProbeVerdict::diverging);
  expect(co, 1.0, ProbeVerdict::converged);
  Outcome o;
  o.pass = pass;
  o.detail = detail;
  return o;
}

Outcome criterion9() {
  gof::TabulationConfig cfg;
  cfg.n = 20000;
  cfg.M = 4000;
  cfg.seed = 9;
  auto raw_bytes = [](const gof::QuantileTable& t) {
    std::string s(t.raw_sorted.size() * sizeof(double), '\0');
    std::memcpy(s.data(), t.raw_sorted.data(), s.size());
    return gof::table_to_json(t) + s;
  };
  const std::string ref = raw_bytes(gof::tabulate_serial(cfg));
  bool tab_ok = true;
  for (int th : {1, 2, 8}) tab_ok &= raw_bytes(gof::tabulate(cfg, th)) == ref;

  gof::MixtureConfig mc;
  mc.n = 10000;
  std::vector<gof::MixtureConfig> grid{mc};
  mc.model = gof::MixtureModel::chisq;
  mc.nu = 2;
  grid.push_back(mc);
  std::string power_ref;
  bool power_ok = true;
  for (int th : {1, 2, 8}) {
    gof::PowerOptions opts;
    opts.threads = th;
    const std::string csv = gof::power_curve_to_csv(gof::power_curve(grid, 0.05, 300, gof::published_table(), 9, opts));
    if (power_ref.empty()) power_ref = csv;
    power_ok &= csv == power_ref;
  }
  Outcome o;
  o.pass = tab_ok && power_ok;
  o.detail = std::string("tabulation (n=20000, M=4000) ") + (tab_ok ? "identical" : "DIFFERS") +
             " for serial/1/2/8 threads; power runs " + (power_ok ? "identical" : "DIFFER") + " for 1/2/8 threads";
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"published table reproduction", criterion1},     {"two-sided constant", criterion2},
      {"distribution-freeness", criterion3},    {"sup oracle equivalence", criterion4},
      {"alpha0-insensitivity", criterion5},     {"band coverage", criterion6},
      {"detection power", criterion7},          {"EFKP probe correctness", criterion8},
      {"parallel determinism", criterion9}};
  std::set<int> wanted;
  for (int i = 1; i < argc; ++i) wanted.insert(std::atoi(argv[i]));
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int id = static_cast<int>(i + 1);
    if (!wanted.empty() && !wanted.count(id)) continue;
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("%s criterion %d (%s): %s [%.1fs]\n", o.pass ? "PASS" : "FAIL", id, criteria[i].first,
                o.detail.c_str(), secs);
    std::fflush(stdout);
    failures += o.pass ? 0 : 1;
  }
  return failures == 0 ? 0 : 1;
}
