#include "gof/bands.hpp"

#include "gof/parallel.hpp"
#include "gof/rng.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <stdexcept>

namespace gof {

std::string_view to_string(BandMethod m) noexcept {
  switch (m) {
    case BandMethod::cscshm: return "cscshm";
    case BandMethod::ks: return "ks";
    case BandMethod::eicker_jaeschke: return "eicker-jaeschke";
  }
  return "?";
}

BandMethod parse_band_method(std::string_view text) {
  if (text == "cscshm") return BandMethod::cscshm;
  if (text == "ks") return BandMethod::ks;
  if (text == "eicker-jaeschke" || text == "ej") return BandMethod::eicker_jaeschke;
  throw std::invalid_argument("unknown band method '" + std::string(text) + "'");
}

namespace {

void require_alpha(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw std::domain_error("alpha must lie in (0,1)");
}

// Builds the band from a half-width rule h(F_n). Points are the distinct
// sample values below X_(n).
template <class HalfWidth>
ConfidenceBand assemble(const Sample& sample, BandMethod method, double alpha, double critical,
                        HalfWidth&& half_width) {
  const std::size_t n = sample.size();
  if (n < 2) throw std::invalid_argument("band needs n >= 2");
  ConfidenceBand band;
  band.method = method;
  band.level = 1.0 - alpha;
  band.critical = critical;
  band.domain_lo = sample.front();
  band.domain_hi = sample.back();
  const double nd = static_cast<double>(n);
  std::size_t i = 0;
  while (i < n && sample[i] < sample.back()) {
    std::size_t j = i;
    while (j + 1 < n && sample[j + 1] == sample[i]) ++j;
    const double edf = static_cast<double>(j + 1) / nd;
    const double h = half_width(edf);
    band.points.push_back({sample[i], edf, std::max(0.0, edf - h), std::min(1.0, edf + h), h});
    i = j + 1;
  }
  return band;
}

}  // namespace

ConfidenceBand band_cscshm(const Sample& sample, double alpha, const CscshmBandOptions& options) {
  require_alpha(alpha);
  const double c = two_sided_critical_value(alpha, options.two_sided_table);
  const WeightFunction q = options.experimental_weight.value_or(WeightFunction::efkp_loglog());
  const double scale = c / std::sqrt(static_cast<double>(sample.size()));
  return assemble(sample, BandMethod::cscshm, alpha, c, [&](double edf) {
    // q-term is 0 where F_n is 0 or 1.
    return (edf <= 0.0 || edf >= 1.0) ? 0.0 : scale * q.evaluate_unchecked(edf);
  });
}

ConfidenceBand band_ks(const Sample& sample, double alpha, std::optional<double> k_alpha) {
  require_alpha(alpha);
  const double k = k_alpha ? *k_alpha : ks_critical_value(alpha);
  if (!(k > 0.0)) throw std::invalid_argument("band_ks: k_alpha must be positive");
  const double h = k / std::sqrt(static_cast<double>(sample.size()));
  return assemble(sample, BandMethod::ks, alpha, k, [h](double) { return h; });
}

ConfidenceBand band_eicker_jaeschke(const Sample& sample, double alpha) {
  require_alpha(alpha);
  const auto n = static_cast<long long>(sample.size());
  const EjConstants ej = ej_constants(n);
  const double factor = (ej.b_n + ej_x_alpha(alpha)) / ej.a_n;
  const double nd = static_cast<double>(n);
  return assemble(sample, BandMethod::eicker_jaeschke, alpha, factor, [&](double edf) {
    return factor * std::sqrt(edf * (1.0 - edf) / nd);
  });
}

ConfidenceBand build_band(const Sample& sample, BandMethod method, double alpha,
                          const CscshmBandOptions& options) {
  switch (method) {
    case BandMethod::cscshm: return band_cscshm(sample, alpha, options);
    case BandMethod::ks: return band_ks(sample, alpha);
    case BandMethod::eicker_jaeschke: return band_eicker_jaeschke(sample, alpha);
  }
  throw std::logic_error("unhandled band method");
}

double kolmogorov_cdf(double x) {
  if (!(x > 0.0)) return 0.0;
  double s = 0.0;
  for (int k = 100; k >= 1; --k) {
    const double term = std::exp(-2.0 * k * k * x * x);
    s += (k % 2 == 0 ? 2.0 : -2.0) * term;
  }
  return std::clamp(1.0 + s, 0.0, 1.0);
}

double kolmogorov_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) throw std::domain_error("kolmogorov_quantile: p must lie in (0,1)");
  double lo = 0.0;
  double hi = 10.0;
  for (int i = 0; i < 200 && hi - lo > 1e-15; ++i) {
    const double mid = 0.5 * (lo + hi);
    (kolmogorov_cdf(mid) < p ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

double ks_critical_value(double alpha) {
  require_alpha(alpha);
  if (std::fabs(alpha - 0.05) <= 1e-12) return 1.35;
  return kolmogorov_quantile(1.0 - alpha);
}

double ej_x_alpha(double alpha) {
  require_alpha(alpha);
  return -std::log(-std::log1p(-alpha) / 4.0);
}

std::vector<EdfWidth> band_width_profile(const ConfidenceBand& band) {
  std::vector<EdfWidth> out;
  out.reserve(band.points.size());
  for (const auto& p : band.points) out.push_back({p.edf, 2.0 * p.half_width});
  return out;
}

bool band_covers(const ConfidenceBand& band, const NullModel& truth) {
  const auto& pts = band.points;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const double next_t = i + 1 < pts.size() ? pts[i + 1].t : band.domain_hi;
    if (truth.cdf(pts[i].t) < pts[i].lower) return false;
    if (truth.cdf(next_t) > pts[i].upper) return false;
  }
  return true;
}

CoverageResult coverage_experiment(std::int64_t n, std::int64_t reps, const NullModel& truth,
                                   BandMethod method, double alpha, std::uint64_t seed, int threads,
                                   const CscshmBandOptions& options) {
  if (reps < 1) throw std::invalid_argument("coverage_experiment: reps must be >= 1");
  if (n < 2) throw std::invalid_argument("coverage_experiment: n must be >= 2");
  auto hits = map_replicates(static_cast<std::size_t>(reps), threads, [&](std::size_t r) {
    RandomStream rng(seed, r);
    std::vector<double> x(static_cast<std::size_t>(n));
    for (auto& v : x) v = truth.quantile(rng.uniform_open());
    const auto band = build_band(Sample(std::move(x)), method, alpha, options);
    return band_covers(band, truth) ? 1 : 0;
  });
  std::int64_t covered = 0;
  for (int h : hits) covered += h;
  CoverageResult res;
  res.reps = reps;
  res.coverage = static_cast<double>(covered) / static_cast<double>(reps);
  res.stderr_ = std::sqrt(res.coverage * (1.0 - res.coverage) / static_cast<double>(reps));
  return res;
}

std::string band_to_csv(const ConfidenceBand& band) {
  std::string out = "t,edf,lower,upper\n";
  char buf[64];
  auto put = [&](double v, char sep) {
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    out.append(buf, res.ptr);
    out.push_back(sep);
  };
  for (const auto& p : band.points) {
    put(p.t, ',');
    put(p.edf, ',');
    put(p.lower, ',');
    put(p.upper, '\n');
  }
  return out;
}

}  // namespace gof
