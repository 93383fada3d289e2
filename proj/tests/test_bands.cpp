#include "gof/bands.hpp"

#include "gof/io.hpp"
#include "gof/rng.hpp"

#include <doctest.h>

#include <cmath>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

using namespace gof;

namespace {

// X_i = i, so F_n(X_(i)) = i/n exactly.
Sample ladder(int n) {
  std::vector<double> x;
  for (int i = 1; i <= n; ++i) x.push_back(i);
  return Sample(std::move(x));
}

Sample random_sample(int n, std::uint64_t seed) {
  RandomStream rng(seed, 3);
  std::vector<double> x(static_cast<std::size_t>(n));
  for (auto& v : x) v = rng.normal();
  return Sample(std::move(x));
}

const BandPoint& at_edf(const ConfidenceBand& b, double edf) {
  for (const auto& p : b.points)
    if (std::fabs(p.edf - edf) < 1e-12) return p;
  throw std::runtime_error("edf not found");
}

}  // namespace

TEST_CASE("critical constants") {
  CHECK(ks_critical_value(0.05) == 1.35);
  CHECK(kolmogorov_quantile(0.95) == doctest::Approx(1.35809863932255).epsilon(1e-10));
  CHECK(ks_critical_value(0.01) == doctest::Approx(kolmogorov_quantile(0.99)));
  CHECK(kolmogorov_cdf(kolmogorov_quantile(0.9)) == doctest::Approx(0.9).epsilon(1e-12));
  CHECK(kolmogorov_cdf(0.0) == 0.0);
  CHECK(ej_x_alpha(0.05) == doctest::Approx(4.35648961016206).epsilon(1e-13));
  CHECK(ej_x_alpha(0.01) > ej_x_alpha(0.05));
}

TEST_CASE("band arithmetic at n = 100") {
  const Sample s = ladder(100);
  const auto cs = band_cscshm(s, 0.05);
  const auto ks = band_ks(s, 0.05);
  const auto ej = band_eicker_jaeschke(s, 0.05);
  CHECK(cs.critical == 4.57);
  CHECK(ks.critical == 1.35);
  CHECK(at_edf(cs, 0.5).upper == doctest::Approx(0.630592149995898).epsilon(1e-13));
  CHECK(at_edf(ks, 0.5).upper == doctest::Approx(0.635).epsilon(1e-13));
  CHECK(at_edf(ej, 0.5).upper == doctest::Approx(0.681871831728612).epsilon(1e-12));

  auto width_at = [](const ConfidenceBand& b, double edf) {
    for (const auto& w : band_width_profile(b))
      if (std::fabs(w.edf - edf) < 1e-12) return w.width;
    return -1.0;
  };
  CHECK(width_at(cs, 0.01) == doctest::Approx(0.112465315776286).epsilon(1e-12));
  CHECK(width_at(ks, 0.01) == doctest::Approx(0.27).epsilon(1e-13));
  CHECK(width_at(cs, 0.01) < width_at(ks, 0.01));
  CHECK(width_at(cs, 0.5) < width_at(ej, 0.5));
  // KS width is constant before clipping.
  for (const auto& w : band_width_profile(ks)) CHECK(w.width == doctest::Approx(0.27));
}

TEST_CASE("band domain and step structure") {
  const Sample s = random_sample(60, 5);
  for (auto m : {BandMethod::cscshm, BandMethod::ks, BandMethod::eicker_jaeschke}) {
    const auto b = build_band(s, m, 0.05);
    CHECK(b.domain_lo == s.front());
    CHECK(b.domain_hi == s.back());
    CHECK(b.points.size() == 59);
    CHECK(b.points.front().t == s.front());
    for (std::size_t i = 0; i < b.points.size(); ++i) {
      const auto& p = b.points[i];
      CHECK(p.t == s[i]);
      CHECK(p.edf == doctest::Approx((i + 1) / 60.0));
      CHECK(0.0 <= p.lower);
      CHECK(p.lower <= p.edf);
      CHECK(p.edf <= p.upper);
      CHECK(p.upper <= 1.0);
    }
  }
  // Ties collapse into one step.
  const Sample tied({1.0, 2.0, 2.0, 3.0, 4.0});
  const auto b = band_ks(tied, 0.05);
  REQUIRE(b.points.size() == 3);
  CHECK(b.points[1].edf == doctest::Approx(0.6));
}

TEST_CASE("clipping and the zero convention in the tails") {
  const Sample s = ladder(20);
  const auto ks = band_ks(s, 0.05);
  CHECK(ks.points.front().lower == 0.0);
  CHECK(ks.points.back().upper == 1.0);
  const auto ej = band_eicker_jaeschke(ladder(16), 0.05);
  for (const auto& p : ej.points) CHECK(p.half_width >= 0.0);
}

TEST_CASE("errors") {
  CHECK_THROWS_AS(band_cscshm(Sample({1.0}), 0.05), std::invalid_argument);
  CHECK_THROWS_AS(band_cscshm(ladder(50), 0.10), std::invalid_argument);
  CHECK_THROWS_AS(band_eicker_jaeschke(ladder(15), 0.05), std::domain_error);
  CHECK_THROWS_AS(band_ks(ladder(50), 1.5), std::domain_error);
  CHECK_THROWS_AS(parse_band_method("wide"), std::invalid_argument);
  CHECK(parse_band_method("ej") == BandMethod::eicker_jaeschke);
  CHECK(parse_band_method(to_string(BandMethod::cscshm)) == BandMethod::cscshm);
}

TEST_CASE("cscshm with a supplied two-sided table") {
  TabulationConfig cfg;
  cfg.n = 1000;
  cfg.M = 500;
  cfg.sided = Sidedness::two;
  const auto t = tabulate(cfg, 1);
  CscshmBandOptions opts;
  opts.two_sided_table = &t;
  const auto b = band_cscshm(ladder(100), 0.10, opts);
  CHECK(b.critical == doctest::Approx(critical_value(t, 0.10)));
}

TEST_CASE("band_covers uses the whole step") {
  const Sample s({0.1, 0.5, 0.9});
  ConfidenceBand b = band_ks(s, 0.05, 0.01);  // very narrow
  CHECK_FALSE(band_covers(b, NullModel::uniform01()));
  b = band_ks(s, 0.05, 10.0);  // everything
  CHECK(band_covers(b, NullModel::uniform01()));
  // Tight enough at the left end of each step, violated inside the first step.
  ConfidenceBand manual;
  manual.domain_lo = 0.1;
  manual.domain_hi = 0.9;
  manual.points = {{0.1, 1.0 / 3, 0.0, 0.4, 0.0}, {0.5, 2.0 / 3, 0.0, 1.0, 0.0}};
  CHECK_FALSE(band_covers(manual, NullModel::uniform01()));  // F(0.5-) = 0.5 > 0.4
}

TEST_CASE("coverage is distribution-free") {
  const auto expo = NullModel::exponential(1.0);
  const auto unif = NullModel::uniform01();
  for (auto m : {BandMethod::cscshm, BandMethod::ks, BandMethod::eicker_jaeschke}) {
    const auto a = coverage_experiment(200, 2000, unif, m, 0.05, 17, 0);
    const auto b = coverage_experiment(200, 2000, expo, m, 0.05, 18, 0);
    CAPTURE(to_string(m));
    CAPTURE(a.coverage);
    CAPTURE(b.coverage);
    const double se = std::sqrt(a.stderr_ * a.stderr_ + b.stderr_ * b.stderr_);
    CHECK(std::fabs(a.coverage - b.coverage) <= 3.0 * std::max(se, 1e-3));
    CHECK(a.stderr_ == doctest::Approx(std::sqrt(a.coverage * (1 - a.coverage) / 2000.0)));
    // Same seed: inversion sampling makes the two runs identical event by event.
    CHECK(coverage_experiment(200, 300, expo, m, 0.05, 17, 1).coverage ==
          coverage_experiment(200, 300, unif, m, 0.05, 17, 2).coverage);
  }
}

TEST_CASE("CSV output re-parses exactly") {
  const auto b = band_cscshm(random_sample(40, 9), 0.05);
  const std::string csv = band_to_csv(b);
  std::istringstream in(csv);
  std::string line;
  std::getline(in, line);
  CHECK(line == "t,edf,lower,upper");
  std::size_t row = 0;
  while (std::getline(in, line)) {
    std::vector<double> cols;
    std::size_t start = 0;
    for (;;) {
      const auto comma = line.find(',', start);
      cols.push_back(parse_sample_text(line.substr(start, comma - start)).at(0));
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    REQUIRE(cols.size() == 4);
    CHECK(cols[0] == b.points[row].t);
    CHECK(cols[1] == b.points[row].edf);
    CHECK(cols[2] == b.points[row].lower);
    CHECK(cols[3] == b.points[row].upper);
    ++row;
  }
  CHECK(row == b.points.size());
}
