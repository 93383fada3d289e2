// gof: command-line front end for the goodness-of-fit library.
//
// Exit codes: 0 success, 1 I/O or runtime failure, 2 usage error,
// 3 data error, 4 table mismatch.

#include "gof/bands.hpp"
#include "gof/detection.hpp"
#include "gof/hc_asymptotics.hpp"
#include "gof/io.hpp"
#include "gof/statistics.hpp"
#include "gof/tabulation.hpp"
#include "gof/weights.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#ifndef GOF_VERSION
#define GOF_VERSION "0.0.0"
#endif

using nlohmann::json;

namespace {

enum Exit { kOk = 0, kRuntime = 1, kUsage = 2, kData = 3, kMismatch = 4 };

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::vector<double> parse_list(const std::string& text, const char* flag) {
  std::vector<double> out;
  std::size_t start = 0;
  for (;;) {
    const auto comma = text.find(',', start);
    const std::string part = text.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
    std::vector<double> v;
    try {
      v = gof::parse_sample_text(part);
    } catch (const gof::DataError&) {
      throw UsageError(std::string(flag) + ": cannot parse '" + part + "'");
    }
    if (v.size() != 1) throw UsageError(std::string(flag) + ": cannot parse '" + part + "'");
    out.push_back(v[0]);
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

gof::Interval parse_interval(const std::string& text) {
  const auto v = parse_list(text, "--interval");
  if (v.size() != 2) throw UsageError("--interval expects A,B");
  gof::Interval iv{v[0], v[1]};
  try {
    iv.validate();
  } catch (const std::invalid_argument& e) {
    throw UsageError(std::string("--interval: ") + e.what());
  }
  return iv;
}

template <class F>
auto usage_guard(F&& f) {
  try {
    return f();
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  } catch (const std::domain_error& e) {
    throw UsageError(e.what());
  }
}

void write_output(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << text;
  if (!out) throw std::runtime_error("failed writing '" + path + "'");
}

// RunManifest: subcommand, every flag as given, the seed, paths, version.
json manifest(const CLI::App& sub, std::optional<std::uint64_t> seed) {
  json flags = json::object();
  for (const CLI::Option* opt : sub.get_options()) {
    if (opt->get_name() == "--help" || opt->get_name().empty()) continue;
    std::string name = opt->get_name();
    while (!name.empty() && name.front() == '-') name.erase(name.begin());
    if (opt->get_expected_min() == 0) {
      flags[name] = opt->count() > 0;
    } else {
      const auto& res = opt->results();
      flags[name] = res.empty() ? opt->get_default_str() : res.back();
    }
  }
  json m = {{"subcommand", sub.get_name()}, {"flags", flags}, {"version", GOF_VERSION}};
  m["seed"] = seed ? json(*seed) : json(nullptr);
  return m;
}

// ---------------------------------------------------------------------------
// test

struct TestFlags {
  std::string input;
  std::string null_spec = "uniform";
  std::string statistic = "cscshm_one_sided";
  std::string weight = "efkp-loglog";
  std::string interval = "0,1";
  double alpha0 = 0.5;
  std::optional<double> alpha;
  std::string table = "builtin";
  bool as_json = false;
  std::string out;
};

struct CriticalRow {
  double alpha;
  std::optional<double> critical;
  std::string source;
};

bool is_cscshm(gof::StatisticFamily f) {
  using F = gof::StatisticFamily;
  return f == F::cscshm_one_sided || f == F::cscshm_two_sided || f == F::cscshm_hat_one_sided ||
         f == F::cscshm_hat_two_sided;
}

bool is_two_sided(gof::StatisticFamily f) {
  using F = gof::StatisticFamily;
  return f == F::cscshm_two_sided || f == F::cscshm_hat_two_sided;
}

// Hat statistics share the limit law of their plain counterparts.
std::vector<CriticalRow> critical_values(const gof::StatisticDescriptor& d, std::size_t n,
                                         const std::vector<double>& alphas, const std::string& table_flag,
                                         std::string& table_label) {
  using F = gof::StatisticFamily;
  std::vector<CriticalRow> rows;
  if (is_cscshm(d.family)) {
    const gof::Sidedness sided = is_two_sided(d.family) ? gof::Sidedness::two : gof::Sidedness::one;
    if (table_flag == "builtin") {
      const bool canonical = *d.weight == gof::WeightFunction::efkp_loglog() && d.interval == gof::Interval{0.0, 1.0};
      if (!canonical)
        throw gof::TableMismatch("the builtin table covers only efkp-loglog on (0,1); supply --table PATH");
      if (sided == gof::Sidedness::one) {
        table_label = "builtin:published-table";
        for (double a : alphas) rows.push_back({a, gof::critical_value(gof::published_table(), a), table_label});
      } else {
        table_label = "builtin:two-sided-constant";
        for (double a : alphas) {
          std::optional<double> c;
          if (std::fabs(a - 0.05) <= 1e-12) c = gof::two_sided_critical_value(a);
          rows.push_back({a, c, table_label});
        }
      }
      return rows;
    }
    const std::string path = gof::resolve_table_path(table_flag);
    const gof::QuantileTable t = gof::load_table(path);
    if (!(t.weight() == *d.weight)) throw gof::TableMismatch("table weight " + t.weight().name() + " does not match " + d.weight->name());
    if (!(t.interval() == d.interval)) throw gof::TableMismatch("table interval does not match --interval");
    if (t.sided() != sided) throw gof::TableMismatch("table sidedness does not match the statistic");
    table_label = path;
    for (double a : alphas) {
      std::optional<double> c;
      try {
        c = gof::critical_value(t, a);
      } catch (const std::out_of_range&) {
      }
      rows.push_back({a, c, table_label});
    }
    return rows;
  }
  if (d.family == F::ks_two_sided) {
    table_label = "kolmogorov";
    for (double a : alphas) rows.push_back({a, gof::ks_critical_value(a), table_label});
    return rows;
  }
  // HC family: asymptotic extreme-value calibration (b_n + x)/a_n.
  table_label = "eicker-jaeschke";
  for (double a : alphas) {
    std::optional<double> c;
    if (n >= 16) {
      const auto ej = gof::ej_constants(static_cast<long long>(n));
      c = (ej.b_n + gof::ev_target_quantile(gof::EvTarget::one_sided_partial, 1.0 - a)) / ej.a_n;
    }
    rows.push_back({a, c, table_label});
  }
  return rows;
}

int cmd_test(const TestFlags& f, const CLI::App& sub) {
  const auto family = usage_guard([&] { return gof::parse_family(f.statistic); });
  const auto null = usage_guard([&] { return gof::NullModel::parse(f.null_spec); });
  gof::StatisticDescriptor d;
  d.family = family;
  d.interval = parse_interval(f.interval);
  d.alpha0 = f.alpha0;
  if (is_cscshm(family)) d.weight = usage_guard([&] { return gof::WeightFunction::parse(f.weight); });
  usage_guard([&] {
    d.validate();
    return 0;
  });
  std::vector<double> alphas{0.01, 0.05, 0.10};
  if (f.alpha) {
    if (!(*f.alpha > 0.0 && *f.alpha < 1.0)) throw UsageError("--alpha must lie in (0,1)");
    if (std::find(alphas.begin(), alphas.end(), *f.alpha) == alphas.end()) alphas.push_back(*f.alpha);
  }

  const gof::Sample x = gof::read_sample_file(f.input);
  gof::Sample u = [&] {
    try {
      return gof::transform_to_uniform(x, null);
    } catch (const std::domain_error& e) {
      throw gof::DataError(e.what());
    }
  }();
  const auto result = usage_guard([&] { return gof::statistic_uniform(u.values(), d); });
  std::string table_label;
  const auto rows = critical_values(d, x.size(), alphas, f.table, table_label);

  if (f.as_json) {
    json crit = json::array();
    for (const auto& r : rows) {
      json row = {{"alpha", r.alpha}};
      row["critical"] = r.critical ? json(*r.critical) : json(nullptr);
      row["reject"] = r.critical ? json(result.value >= *r.critical) : json(nullptr);
      crit.push_back(row);
    }
    json j = {{"statistic", f.statistic},
              {"null", null.name()},
              {"n", x.size()},
              {"value", result.value},
              {"argmax_u", result.argmax_u},
              {"interval", {d.interval.a, d.interval.b}},
              {"table", table_label},
              {"critical_values", crit},
              {"manifest", manifest(sub, std::nullopt)}};
    if (d.weight) j["weight"] = d.weight->name();
    if (!is_cscshm(family) && family != gof::StatisticFamily::ks_two_sided) j["alpha0"] = d.alpha0;
    write_output(f.out, j.dump(2) + "\n");
    return kOk;
  }
  std::string text;
  text += "statistic  " + f.statistic + "\n";
  if (d.weight) text += "weight     " + d.weight->name() + "\n";
  text += "null       " + null.name() + "\n";
  text += "n          " + std::to_string(x.size()) + "\n";
  text += "value      " + gof::format_double(result.value) + "\n";
  text += "argmax_u   " + gof::format_double(result.argmax_u) + "\n";
  text += "table      " + table_label + "\n";
  text += "alpha\tcritical\tdecision\n";
  for (const auto& r : rows) {
    text += gof::format_double(r.alpha) + "\t";
    if (r.critical) {
      text += gof::format_double(*r.critical) + "\t" + (result.value >= *r.critical ? "reject" : "accept") + "\n";
    } else {
      text += "n/a\tn/a\n";
    }
  }
  write_output(f.out, text);
  return kOk;
}

// ---------------------------------------------------------------------------
// tabulate

struct TabulateFlags {
  std::int64_t n = 50000;
  std::int64_t m = 50000;
  std::string weight = "efkp-loglog";
  std::string interval = "0,1";
  std::string sided = "one";
  std::uint64_t seed = 20240601;
  int threads = 0;
  std::string out;
  bool raw = false;
};

int cmd_tabulate(const TabulateFlags& f) {
  gof::TabulationConfig cfg;
  cfg.n = f.n;
  cfg.M = f.m;
  cfg.weight = usage_guard([&] { return gof::WeightFunction::parse(f.weight); });
  cfg.interval = parse_interval(f.interval);
  cfg.sided = usage_guard([&] { return gof::parse_sidedness(f.sided); });
  cfg.seed = f.seed;
  usage_guard([&] {
    cfg.validate();
    return 0;
  });
  std::string path = f.out;
  if (path.empty()) {
    const std::string dir = gof::table_cache_dir();
    if (dir.empty()) throw UsageError("--out is required unless GOF_TABLE_DIR is set");
    std::filesystem::create_directories(dir);
    path = (std::filesystem::path(dir) / ("table-" + cfg.weight.name() + "-" + f.sided + "-" + std::to_string(cfg.n) +
                                          "-" + std::to_string(cfg.M) + "-" + std::to_string(cfg.seed) + ".json"))
               .string();
  }
  const auto table = usage_guard([&] { return gof::tabulate(cfg, f.threads); });
  gof::save_table(table, path, f.raw);
  std::cout << "wrote " << path << "\n";
  std::cout << "seed " << cfg.seed << "\n";
  for (double p : {0.90, 0.95, 0.99}) std::cout << "q" << gof::format_double(p) << "\t" << gof::format_double(table.quantile(p)) << "\n";
  return kOk;
}

// ---------------------------------------------------------------------------
// band

struct BandFlags {
  std::string input;
  double alpha = 0.05;
  std::string method = "cscshm";
  std::string table;
  std::string out;
};

int cmd_band(const BandFlags& f) {
  const auto method = usage_guard([&] { return gof::parse_band_method(f.method); });
  if (!(f.alpha > 0.0 && f.alpha < 1.0)) throw UsageError("--alpha must lie in (0,1)");
  const gof::Sample x = gof::read_sample_file(f.input);
  std::optional<gof::QuantileTable> table;
  gof::CscshmBandOptions opts;
  if (!f.table.empty() && f.table != "builtin") {
    table = gof::load_table(gof::resolve_table_path(f.table));
    if (!(table->weight() == gof::WeightFunction::efkp_loglog()) || !(table->interval() == gof::Interval{}) ||
        table->sided() != gof::Sidedness::two)
      throw gof::TableMismatch("band tables must be two-sided efkp-loglog on (0,1)");
    opts.two_sided_table = &*table;
  }
  const auto band = usage_guard([&] { return gof::build_band(x, method, f.alpha, opts); });
  write_output(f.out, gof::band_to_csv(band));
  return kOk;
}

// ---------------------------------------------------------------------------
// detect

struct DetectFlags {
  std::string model = "normal";
  std::int64_t n = 10000;
  std::string beta = "0.6";
  std::string r = "0.6";
  int nu = 1;
  double alpha = 0.05;
  std::int64_t reps = 500;
  std::uint64_t seed = 20240601;
  std::string table = "builtin";
  std::string weight = "efkp-loglog";
  std::string interval = "0,1";
  int threads = 0;
  std::string out;
};

int cmd_detect(const DetectFlags& f, const CLI::App& sub) {
  const auto model = usage_guard([&] { return gof::parse_mixture_model(f.model); });
  gof::PowerOptions opts;
  opts.weight = usage_guard([&] { return gof::WeightFunction::parse(f.weight); });
  opts.interval = parse_interval(f.interval);
  opts.threads = f.threads;
  if (!(f.alpha > 0.0 && f.alpha < 1.0)) throw UsageError("--alpha must lie in (0,1)");
  if (f.reps < 1) throw UsageError("--reps must be >= 1");
  std::vector<gof::MixtureConfig> grid;
  for (double beta : parse_list(f.beta, "--beta"))
    for (double r : parse_list(f.r, "--r")) {
      gof::MixtureConfig c;
      c.model = model;
      c.nu = f.nu;
      c.n = f.n;
      c.beta = beta;
      c.r = r;
      usage_guard([&] {
        c.validate();
        return 0;
      });
      grid.push_back(c);
    }
  gof::QuantileTable table;
  if (f.table == "builtin") {
    table = gof::published_table();
  } else {
    table = gof::load_table(gof::resolve_table_path(f.table));
  }
  const auto rows = gof::power_curve(grid, f.alpha, f.reps, table, f.seed, opts);
  write_output(f.out, gof::power_curve_to_csv(rows));
  // The CSV schema is fixed, so the run record goes beside it.
  const std::string record = manifest(sub, f.seed).dump() + "\n";
  if (f.out.empty() || f.out == "-") {
    std::cerr << record;
  } else {
    write_output(f.out + ".manifest.json", record);
  }
  return kOk;
}

// ---------------------------------------------------------------------------
// hc

struct HcFlags {
  std::int64_t n = 100000;
  std::int64_t m = 2000;
  double alpha0 = 0.1;
  std::string sided = "one";
  std::uint64_t seed = 20240601;
  int threads = 0;
  std::string out;
};

int cmd_hc(const HcFlags& f, const CLI::App& sub) {
  const auto sided = usage_guard([&] { return gof::parse_sidedness(f.sided); });
  const auto c = usage_guard([&] { return gof::simulate_normalized_hc(f.n, f.m, f.alpha0, sided, f.seed, f.threads); });
  json j = json::parse(gof::ev_comparison_to_json(c));
  j["target_cdf_at_0"] = gof::ev_target_cdf(c.target, 0.0);
  j["manifest"] = manifest(sub, f.seed);
  write_output(f.out, j.dump(2) + "\n");
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Weighted empirical-process goodness-of-fit tests, tables, bands and detection studies"};
  app.set_version_flag("--version", std::string(GOF_VERSION));
  app.require_subcommand(1);

  TestFlags tf;
  auto* test = app.add_subcommand("test", "Evaluate a statistic on a sample and report decisions");
  test->add_option("--input", tf.input, "Sample file, one value per line")->required();
  test->add_option("--null", tf.null_spec, "uniform | normal:MU,SIGMA | exponential:L | chisq:NU | table:PATH")
      ->capture_default_str();
  test->add_option("--statistic", tf.statistic,
                   "cscshm_one_sided | cscshm_two_sided | cscshm_hat_one_sided | cscshm_hat_two_sided | hc | "
                   "hc_plus | hc_star | ks_two_sided")
      ->capture_default_str();
  test->add_option("--weight", tf.weight, "efkp-loglog | sdp | chibisov-oreilly:NU | loglog-power:SIGMA")
      ->capture_default_str();
  test->add_option("--interval", tf.interval, "A,B")->capture_default_str();
  test->add_option("--alpha0", tf.alpha0, "Upper end for the HC family")->capture_default_str();
  test->add_option("--alpha", tf.alpha, "Extra significance level");
  test->add_option("--table", tf.table, "builtin or a table file")->capture_default_str();
  test->add_flag("--json", tf.as_json, "Machine-readable output");
  test->add_option("--out", tf.out, "Output file (default stdout)");

  TabulateFlags bf;
  auto* tab = app.add_subcommand("tabulate", "Simulate a null limit law and write a quantile table");
  tab->add_option("--n", bf.n, "Lattice size")->capture_default_str();
  tab->add_option("--m", bf.m, "Replications")->capture_default_str();
  tab->add_option("--weight", bf.weight)->capture_default_str();
  tab->add_option("--interval", bf.interval)->capture_default_str();
  tab->add_option("--sided", bf.sided, "one | two")->capture_default_str();
  tab->add_option("--seed", bf.seed)->capture_default_str();
  tab->add_option("--threads", bf.threads, "0 = OpenMP default")->capture_default_str();
  tab->add_option("--out", bf.out, "Table path (default: a name under GOF_TABLE_DIR)");
  tab->add_flag("--raw", bf.raw, "Also write the raw simulated values");

  BandFlags nf;
  auto* band = app.add_subcommand("band", "Confidence band for the sampling CDF as CSV");
  band->add_option("--input", nf.input)->required();
  band->add_option("--alpha", nf.alpha)->capture_default_str();
  band->add_option("--method", nf.method, "cscshm | ks | eicker-jaeschke")->capture_default_str();
  band->add_option("--table", nf.table, "Two-sided table for cscshm at alpha != 0.05");
  band->add_option("--out", nf.out);

  DetectFlags df;
  auto* det = app.add_subcommand("detect", "Power of the one-sided test against sparse mixtures");
  det->add_option("--model", df.model, "normal | chisq")->capture_default_str();
  det->add_option("--n", df.n)->capture_default_str();
  det->add_option("--beta", df.beta, "Comma-separated list")->capture_default_str();
  det->add_option("--r", df.r, "Comma-separated list")->capture_default_str();
  det->add_option("--nu", df.nu)->capture_default_str();
  det->add_option("--alpha", df.alpha)->capture_default_str();
  det->add_option("--reps", df.reps)->capture_default_str();
  det->add_option("--seed", df.seed)->capture_default_str();
  det->add_option("--table", df.table)->capture_default_str();
  det->add_option("--weight", df.weight)->capture_default_str();
  det->add_option("--interval", df.interval)->capture_default_str();
  det->add_option("--threads", df.threads)->capture_default_str();
  det->add_option("--out", df.out);

  HcFlags hf;
  auto* hc = app.add_subcommand("hc", "Normalized HC against its extreme-value limit");
  hc->add_option("--n", hf.n)->capture_default_str();
  hc->add_option("--m", hf.m)->capture_default_str();
  hc->add_option("--alpha0", hf.alpha0)->capture_default_str();
  hc->add_option("--sided", hf.sided)->capture_default_str();
  hc->add_option("--seed", hf.seed)->capture_default_str();
  hc->add_option("--threads", hf.threads)->capture_default_str();
  hc->add_option("--out", hf.out);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*test) return cmd_test(tf, *test);
    if (*tab) return cmd_tabulate(bf);
    if (*band) return cmd_band(nf);
    if (*det) return cmd_detect(df, *det);
    if (*hc) return cmd_hc(hf, *hc);
  } catch (const UsageError& e) {
    std::cerr << "gof: usage error: " << e.what() << "\n";
    return kUsage;
  } catch (const gof::DataError& e) {
    std::cerr << "gof: data error: " << e.what() << "\n";
    return kData;
  } catch (const gof::TableMismatch& e) {
    std::cerr << "gof: table mismatch: " << e.what() << "\n";
    return kMismatch;
  } catch (const std::exception& e) {
    std::cerr << "gof: error: " << e.what() << "\n";
    return kRuntime;
  }
  return kUsage;
}
