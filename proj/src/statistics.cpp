#include "gof/statistics.hpp"

#include "gof/special_functions.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace gof {

// ---------------------------------------------------------------------------
// Sample, NullModel, descriptors

Sample::Sample(std::vector<double> values) : values_(std::move(values)) {
  if (values_.empty()) throw std::invalid_argument("sample is empty");
  for (double v : values_)
    if (!std::isfinite(v)) throw std::invalid_argument("sample contains a non-finite value");
  std::sort(values_.begin(), values_.end());
}

namespace {

double parse_double(std::string_view text, std::string_view context) {
  double v = 0.0;
  auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (res.ec != std::errc() || res.ptr != text.data() + text.size())
    throw std::invalid_argument("cannot parse number '" + std::string(text) + "' in '" +
                                std::string(context) + "'");
  return v;
}

std::vector<double> parse_params(std::string_view text, std::string_view context) {
  std::vector<double> out;
  while (!text.empty()) {
    const auto comma = text.find(',');
    out.push_back(parse_double(text.substr(0, comma), context));
    if (comma == std::string_view::npos) break;
    text.remove_prefix(comma + 1);
  }
  return out;
}

}  // namespace

NullModel NullModel::uniform01() {
  NullModel m;
  m.kind_ = NullKind::uniform01;
  m.name_ = "uniform";
  m.lo_ = 0.0;
  m.hi_ = 1.0;
  return m;
}

NullModel NullModel::normal(double mu, double sigma) {
  if (!std::isfinite(mu) || !(sigma > 0.0) || !std::isfinite(sigma))
    throw std::invalid_argument("normal null: need finite mu and sigma > 0");
  NullModel m;
  m.kind_ = NullKind::normal;
  m.p1_ = mu;
  m.p2_ = sigma;
  m.lo_ = -std::numeric_limits<double>::infinity();
  m.hi_ = std::numeric_limits<double>::infinity();
  std::ostringstream os;
  os << "normal:" << mu << ',' << sigma;
  m.name_ = os.str();
  return m;
}

NullModel NullModel::exponential(double lambda) {
  if (!(lambda > 0.0) || !std::isfinite(lambda))
    throw std::invalid_argument("exponential null: need lambda > 0");
  NullModel m;
  m.kind_ = NullKind::exponential;
  m.p1_ = lambda;
  m.lo_ = 0.0;
  m.hi_ = std::numeric_limits<double>::infinity();
  std::ostringstream os;
  os << "exponential:" << lambda;
  m.name_ = os.str();
  return m;
}

NullModel NullModel::chisq(double nu) {
  if (!(nu > 0.0) || !std::isfinite(nu)) throw std::invalid_argument("chisq null: need nu > 0");
  NullModel m;
  m.kind_ = NullKind::chisq;
  m.p1_ = nu;
  m.lo_ = 0.0;
  m.hi_ = std::numeric_limits<double>::infinity();
  std::ostringstream os;
  os << "chisq:" << nu;
  m.name_ = os.str();
  return m;
}

NullModel NullModel::user_table(std::vector<std::pair<double, double>> knots) {
  if (knots.size() < 2) throw std::invalid_argument("table null: need at least two knots");
  for (std::size_t i = 0; i < knots.size(); ++i) {
    const auto [t, f] = knots[i];
    if (!std::isfinite(t) || !(f >= 0.0 && f <= 1.0))
      throw std::invalid_argument("table null: knots must be finite with F in [0,1]");
    if (i > 0 && !(t > knots[i - 1].first && f > knots[i - 1].second))
      throw std::invalid_argument("table null: knots must be strictly increasing in t and F");
  }
  if (knots.front().second != 0.0 || knots.back().second != 1.0)
    throw std::invalid_argument("table null: F must run from 0 to 1");
  NullModel m;
  m.kind_ = NullKind::user_table;
  m.name_ = "table";
  m.lo_ = knots.front().first;
  m.hi_ = knots.back().first;
  m.knots_ = std::move(knots);
  return m;
}

NullModel NullModel::custom(std::string name, std::function<double(double)> cdf, double lo, double hi,
                            std::function<double(double)> quantile) {
  if (!cdf) throw std::invalid_argument("custom null: missing cdf");
  if (!(lo < hi)) throw std::invalid_argument("custom null: empty support");
  NullModel m;
  m.kind_ = NullKind::custom;
  m.name_ = std::move(name);
  m.lo_ = lo;
  m.hi_ = hi;
  m.cdf_ = std::move(cdf);
  m.quantile_ = std::move(quantile);
  return m;
}

NullModel NullModel::parse(std::string_view text) {
  const auto colon = text.find(':');
  const std::string_view head = text.substr(0, colon);
  const std::string_view rest =
      colon == std::string_view::npos ? std::string_view{} : text.substr(colon + 1);
  if (head == "uniform" && rest.empty()) return uniform01();
  if (head == "normal") {
    if (rest.empty()) return normal(0.0, 1.0);
    const auto p = parse_params(rest, text);
    if (p.size() != 2) throw std::invalid_argument("normal null takes MU,SIGMA");
    return normal(p[0], p[1]);
  }
  if (head == "exponential") {
    if (rest.empty()) return exponential(1.0);
    const auto p = parse_params(rest, text);
    if (p.size() != 1) throw std::invalid_argument("exponential null takes LAMBDA");
    return exponential(p[0]);
  }
  if (head == "chisq") {
    const auto p = parse_params(rest, text);
    if (p.size() != 1) throw std::invalid_argument("chisq null takes NU");
    return chisq(p[0]);
  }
  if (head == "table" && !rest.empty()) {
    std::ifstream in{std::string(rest)};
    if (!in) throw std::invalid_argument("cannot open null table '" + std::string(rest) + "'");
    std::vector<std::pair<double, double>> knots;
    std::string line;
    while (std::getline(in, line)) {
      std::string_view sv = line;
      if (const auto hash = sv.find('#'); hash != std::string_view::npos) sv = sv.substr(0, hash);
      while (!sv.empty() && std::isspace(static_cast<unsigned char>(sv.front()))) sv.remove_prefix(1);
      while (!sv.empty() && std::isspace(static_cast<unsigned char>(sv.back()))) sv.remove_suffix(1);
      if (sv.empty() || sv.front() == 't') continue;  // blank or header
      const auto p = parse_params(sv, line);
      if (p.size() != 2) throw std::invalid_argument("null table rows are t,F");
      knots.emplace_back(p[0], p[1]);
    }
    auto m = user_table(std::move(knots));
    m.name_ = "table:" + std::string(rest);
    return m;
  }
  throw std::invalid_argument("unknown null model '" + std::string(text) + "'");
}

bool NullModel::in_support(double t) const noexcept {
  if (!std::isfinite(t)) return false;
  switch (kind_) {
    case NullKind::uniform01: return t > 0.0 && t < 1.0;
    case NullKind::normal: return true;
    case NullKind::exponential:
    case NullKind::chisq: return t > 0.0;
    case NullKind::user_table:
    case NullKind::custom: return t > lo_ && t < hi_;
  }
  return false;
}

double NullModel::cdf(double t) const {
  if (!in_support(t))
    throw std::domain_error("null " + name_ + ": value outside the support of F0");
  switch (kind_) {
    case NullKind::uniform01: return t;
    case NullKind::normal: return std_normal_cdf((t - p1_) / p2_);
    case NullKind::exponential: return -std::expm1(-p1_ * t);
    case NullKind::chisq: return chisq_cdf(t, p1_);
    case NullKind::user_table: {
      const auto it = std::upper_bound(knots_.begin(), knots_.end(), t,
                                       [](double v, const auto& k) { return v < k.first; });
      const auto& hi = *it;
      const auto& lo = *(it - 1);
      const double w = (t - lo.first) / (hi.first - lo.first);
      return lo.second + w * (hi.second - lo.second);
    }
    case NullKind::custom: return cdf_(t);
  }
  return 0.0;
}

double NullModel::quantile(double p) const {
  if (!(p > 0.0 && p < 1.0)) throw std::domain_error("null quantile: p must lie in (0,1)");
  switch (kind_) {
    case NullKind::uniform01: return p;
    case NullKind::normal: return p1_ + p2_ * std_normal_quantile(p);
    case NullKind::exponential: return -std::log1p(-p) / p1_;
    case NullKind::chisq: {
      // Bisection on the CDF; correctness over speed.
      double lo = 0.0;
      double hi = std::max(1.0, p1_);
      while (chisq_cdf(hi, p1_) < p) hi *= 2.0;
      for (int i = 0; i < 200 && hi - lo > 1e-15 * hi; ++i) {
        const double mid = 0.5 * (lo + hi);
        (chisq_cdf(mid, p1_) < p ? lo : hi) = mid;
      }
      return 0.5 * (lo + hi);
    }
    case NullKind::user_table: {
      const auto it = std::upper_bound(knots_.begin(), knots_.end(), p,
                                       [](double v, const auto& k) { return v < k.second; });
      const auto& hi = *it;
      const auto& lo = *(it - 1);
      const double w = (p - lo.second) / (hi.second - lo.second);
      return lo.first + w * (hi.first - lo.first);
    }
    case NullKind::custom:
      if (!quantile_) throw std::logic_error("custom null " + name_ + " has no quantile");
      return quantile_(p);
  }
  return 0.0;
}

void Interval::validate() const {
  if (!(a >= 0.0 && a < b && b <= 1.0))
    throw std::invalid_argument("interval must satisfy 0 <= a < b <= 1");
}

std::string_view to_string(StatisticFamily f) noexcept {
  switch (f) {
    case StatisticFamily::cscshm_two_sided: return "cscshm_two_sided";
    case StatisticFamily::cscshm_one_sided: return "cscshm_one_sided";
    case StatisticFamily::cscshm_hat_two_sided: return "cscshm_hat_two_sided";
    case StatisticFamily::cscshm_hat_one_sided: return "cscshm_hat_one_sided";
    case StatisticFamily::hc: return "hc";
    case StatisticFamily::hc_plus: return "hc_plus";
    case StatisticFamily::hc_star: return "hc_star";
    case StatisticFamily::ks_two_sided: return "ks_two_sided";
  }
  return "?";
}

StatisticFamily parse_family(std::string_view text) {
  for (auto f : {StatisticFamily::cscshm_two_sided, StatisticFamily::cscshm_one_sided,
                 StatisticFamily::cscshm_hat_two_sided, StatisticFamily::cscshm_hat_one_sided,
                 StatisticFamily::hc, StatisticFamily::hc_plus, StatisticFamily::hc_star,
                 StatisticFamily::ks_two_sided}) {
    if (to_string(f) == text) return f;
  }
  throw std::invalid_argument("unknown statistic family '" + std::string(text) + "'");
}

std::string_view to_string(Sidedness s) noexcept { return s == Sidedness::one ? "one" : "two"; }

Sidedness parse_sidedness(std::string_view text) {
  if (text == "one") return Sidedness::one;
  if (text == "two") return Sidedness::two;
  throw std::invalid_argument("sided must be 'one' or 'two'");
}

namespace {

bool is_cscshm(StatisticFamily f) {
  return f == StatisticFamily::cscshm_two_sided || f == StatisticFamily::cscshm_one_sided ||
         f == StatisticFamily::cscshm_hat_two_sided || f == StatisticFamily::cscshm_hat_one_sided;
}

bool is_hc(StatisticFamily f) {
  return f == StatisticFamily::hc || f == StatisticFamily::hc_plus || f == StatisticFamily::hc_star;
}

}  // namespace

void StatisticDescriptor::validate() const {
  interval.validate();
  if (is_cscshm(family) && !weight)
    throw std::invalid_argument(std::string(to_string(family)) + " needs a weight function");
  if (is_hc(family) && !(alpha0 > 0.0 && alpha0 < 1.0))
    throw std::invalid_argument("alpha0 must lie in (0,1)");
}

Sample transform_to_uniform(const Sample& sample, const NullModel& null) {
  std::vector<double> u;
  u.reserve(sample.size());
  for (double x : sample.values()) {
    const double v = null.cdf(x);
    if (!(v > 0.0 && v < 1.0))
      throw std::domain_error("null " + null.name() + ": F0(x) rounds to 0 or 1 for x = " +
                              std::to_string(x));
    u.push_back(v);
  }
  return Sample(std::move(u));
}

// ---------------------------------------------------------------------------
// Exact suprema

namespace {

constexpr double kSearchWidth = 1e-10;
constexpr double kInvPhi = 0.61803398874989484820;

// Ratio policies. value(u, c) is the signed ratio (c - u)/w with the sqrt(n)
// factor left to the caller; weight(u) is the denominator where it depends
// on u only (used for piece bounds and interior search).
struct WeightedRatio {
  const WeightFunction& q;
  double weight(double u) const noexcept {
    return (u <= 0.0 || u >= 1.0) ? 0.0 : q.evaluate_unchecked(u);
  }
};

struct Tracker {
  double value = -std::numeric_limits<double>::infinity();
  double where = 0.0;
  void offer(double v, double u) noexcept {
    if (v > value) {
      value = v;
      where = u;
    }
  }
};

// Maximize s(c - u)/w(u) on the open piece (lo, hi) by an 8-point scan
// followed by golden-section refinement of the best bracket.
template <class W>
void search_piece(const W& w, double lo, double hi, double c, double s, double scale, Tracker& best) {
  auto f = [&](double u) { return s * (c - u) / w.weight(u) * scale; };
  constexpr int kGrid = 8;
  double grid[kGrid];
  double vals[kGrid];
  int arg = 0;
  for (int j = 0; j < kGrid; ++j) {
    grid[j] = lo + (hi - lo) * (j + 1) / (kGrid + 1);
    vals[j] = f(grid[j]);
    if (vals[j] > vals[arg]) arg = j;
  }
  best.offer(vals[arg], grid[arg]);
  double x0 = arg == 0 ? lo : grid[arg - 1];
  double x3 = arg == kGrid - 1 ? hi : grid[arg + 1];
  double x1 = x3 - kInvPhi * (x3 - x0);
  double x2 = x0 + kInvPhi * (x3 - x0);
  double f1 = f(x1);
  double f2 = f(x2);
  while (x3 - x0 > kSearchWidth) {
    if (f1 >= f2) {
      x3 = x2;
      x2 = x1;
      f2 = f1;
      x1 = x3 - kInvPhi * (x3 - x0);
      f1 = f(x1);
    } else {
      x0 = x1;
      x1 = x2;
      f1 = f2;
      x2 = x0 + kInvPhi * (x3 - x0);
      f2 = f(x2);
    }
  }
  if (f1 >= f2) best.offer(f1, x1); else best.offer(f2, x2);
}

// Core supremum over (a,b) of sign-adjusted (G_n(u) - u)/w, times sqrt(n).
// Mode::weighted divides by q(u) and searches constancy pieces;
// Mode::hat divides by q(G_n(u)) (0 where G_n is 0 or 1); Mode::plain uses w = 1.
enum class Mode { weighted, hat, plain };

SupLocation exact_sup(std::span<const double> u, Interval iv, bool two_sided, Mode mode,
                      const WeightFunction* q) {
  iv.validate();
  const std::size_t n = u.size();
  if (n == 0) throw std::invalid_argument("exact_sup: empty sample");
  const double nd = static_cast<double>(n);
  const double scale = std::sqrt(nd);
  const double a = iv.a;
  const double b = iv.b;

  auto weight_at = [&](double x, double c) -> double {
    switch (mode) {
      case Mode::weighted: return (x <= 0.0 || x >= 1.0) ? 0.0 : q->evaluate_unchecked(x);
      case Mode::hat: return (c <= 0.0 || c >= 1.0) ? 0.0 : q->evaluate_unchecked(c);
      case Mode::plain: return 1.0;
    }
    return 1.0;
  };
  // Value at location x with EDF level c; 0 when the denominator vanishes
  // (boundary limit for the weighted mode, ratio convention for the hat mode).
  auto value_with = [&](double x, double c, double w) -> double {
    if (w <= 0.0) return 0.0;
    const double num = c - x;
    return (two_sided ? std::fabs(num) : num) / w * scale;
  };

  Tracker best;
  const auto first_in = static_cast<std::size_t>(std::upper_bound(u.begin(), u.end(), a) - u.begin());
  const auto end_in = static_cast<std::size_t>(std::lower_bound(u.begin(), u.end(), b) - u.begin());

  // One-sided limits at the interval ends.
  {
    const double c = static_cast<double>(first_in) / nd;
    best.offer(a > 0.0 ? value_with(a, c, weight_at(a, c)) : 0.0, a);
  }
  {
    const double c = static_cast<double>(end_in) / nd;
    best.offer(b < 1.0 ? value_with(b, c, weight_at(b, c)) : 0.0, b);
  }

  // Jump points strictly inside (a,b) and their left limits. Distinct values
  // only; ties move the EDF by their multiplicity.
  std::vector<double> points;
  std::vector<double> levels;     // EDF on [points[t], points[t+1])
  std::vector<double> q_points;   // q(points[t]) for the weighted mode
  if (mode == Mode::weighted) {
    points.reserve(end_in - first_in);
    levels.reserve(end_in - first_in);
    q_points.reserve(end_in - first_in);
  }
  std::size_t i = first_in;
  while (i < end_in) {
    const double x = u[i];
    std::size_t j = i;
    while (j + 1 < n && u[j + 1] == x) ++j;
    const double c_left = static_cast<double>(i) / nd;
    const double c_right = static_cast<double>(j + 1) / nd;
    if (mode == Mode::weighted) {
      const double w = weight_at(x, 0.0);
      best.offer(value_with(x, c_left, w), x);
      best.offer(value_with(x, c_right, w), x);
      points.push_back(x);
      levels.push_back(c_right);
      q_points.push_back(w);
    } else {
      best.offer(value_with(x, c_left, weight_at(x, c_left)), x);
      best.offer(value_with(x, c_right, weight_at(x, c_right)), x);
    }
    i = j + 1;
  }

  if (mode != Mode::weighted) return {best.value, best.where};

  // Interior maxima of (c - u)/q(u) on each constancy piece, split at the
  // monotonicity breakpoints of q so q is monotone on every sub-piece. Pieces
  // whose bound cannot beat the running best are skipped.
  const WeightedRatio ratio{*q};
  const std::vector<double>& splits = q->monotone_breakpoints();
  std::vector<double> q_splits;
  for (double s : splits) q_splits.push_back(ratio.weight(s));
  const double qa = ratio.weight(a);
  const double qb = ratio.weight(b);

  auto process = [&](double lo, double q_lo, double hi, double q_hi, double c) {
    if (!(hi - lo > kSearchWidth)) return;
    const double q_min = std::min(q_lo, q_hi);
    const double q_max = std::max(q_lo, q_hi);
    for (double s : {1.0, -1.0}) {
      if (s < 0.0 && !two_sided) break;
      // s(c - u) is largest at lo for s = +1 and at hi for s = -1.
      const double num_max = s > 0.0 ? c - lo : hi - c;
      double bound;
      if (num_max > 0.0) {
        bound = q_min > 0.0 ? num_max / q_min * scale : std::numeric_limits<double>::infinity();
      } else {
        bound = q_max > 0.0 ? num_max / q_max * scale : 0.0;
      }
      if (bound <= best.value) continue;
      search_piece(ratio, lo, hi, c, s, scale, best);
    }
  };
  auto piece = [&](double lo, double q_lo, double hi, double q_hi, double c) {
    for (std::size_t t = 0; t < splits.size(); ++t) {
      if (lo < splits[t] && splits[t] < hi) {
        process(lo, q_lo, splits[t], q_splits[t], c);
        lo = splits[t];
        q_lo = q_splits[t];
      }
    }
    process(lo, q_lo, hi, q_hi, c);
  };

  double lo = a;
  double q_lo = qa;
  double c = static_cast<double>(first_in) / nd;
  for (std::size_t t = 0; t < points.size(); ++t) {
    piece(lo, q_lo, points[t], q_points[t], c);
    lo = points[t];
    q_lo = q_points[t];
    c = levels[t];
  }
  piece(lo, q_lo, b, qb, c);

  return {best.value, best.where};
}

}  // namespace

SupLocation sup_weighted_positive(std::span<const double> u_sorted, const WeightFunction& q,
                                  Interval interval) {
  return exact_sup(u_sorted, interval, false, Mode::weighted, &q);
}

SupLocation sup_weighted_absolute(std::span<const double> u_sorted, const WeightFunction& q,
                                  Interval interval) {
  return exact_sup(u_sorted, interval, true, Mode::weighted, &q);
}

SupLocation sup_weighted_hat(std::span<const double> u_sorted, const WeightFunction& q,
                             Interval interval, Sidedness sided) {
  return exact_sup(u_sorted, interval, sided == Sidedness::two, Mode::hat, &q);
}

SupLocation sup_ks(std::span<const double> u_sorted) {
  return exact_sup(u_sorted, Interval{0.0, 1.0}, true, Mode::plain, nullptr);
}

namespace {

void require_unit_sample(std::span<const double> u) {
  for (double v : u)
    if (!(v > 0.0 && v < 1.0)) throw std::domain_error("uniform-scale sample must lie in (0,1)");
}

StatisticResult wrap(SupLocation loc, StatisticDescriptor d) {
  return StatisticResult{loc.value, loc.argmax_u, std::move(d)};
}

}  // namespace

StatisticResult sup_weighted_positive(const Sample& u_sorted, const WeightFunction& q, Interval interval) {
  require_unit_sample(u_sorted.values());
  return wrap(sup_weighted_positive(u_sorted.values(), q, interval),
              StatisticDescriptor{StatisticFamily::cscshm_one_sided, q, interval, 0.5});
}

StatisticResult sup_weighted_absolute(const Sample& u_sorted, const WeightFunction& q, Interval interval) {
  require_unit_sample(u_sorted.values());
  return wrap(sup_weighted_absolute(u_sorted.values(), q, interval),
              StatisticDescriptor{StatisticFamily::cscshm_two_sided, q, interval, 0.5});
}

StatisticResult statistic_uniform(std::span<const double> u, const StatisticDescriptor& d) {
  d.validate();
  require_unit_sample(u);
  const auto sdp = WeightFunction::sdp();
  const double nd = static_cast<double>(u.size());
  switch (d.family) {
    case StatisticFamily::cscshm_one_sided:
      return wrap(sup_weighted_positive(u, *d.weight, d.interval), d);
    case StatisticFamily::cscshm_two_sided:
      return wrap(sup_weighted_absolute(u, *d.weight, d.interval), d);
    case StatisticFamily::cscshm_hat_one_sided:
      return wrap(sup_weighted_hat(u, *d.weight, d.interval, Sidedness::one), d);
    case StatisticFamily::cscshm_hat_two_sided:
      return wrap(sup_weighted_hat(u, *d.weight, d.interval, Sidedness::two), d);
    case StatisticFamily::hc:
      return wrap(sup_weighted_positive(u, sdp, Interval{0.0, d.alpha0}), d);
    case StatisticFamily::hc_plus: {
      const Interval iv{1.0 / nd, d.alpha0};
      if (!(iv.a < iv.b)) throw std::invalid_argument("hc_plus: need 1/n < alpha0");
      return wrap(sup_weighted_positive(u, sdp, iv), d);
    }
    case StatisticFamily::hc_star: {
      const auto k = static_cast<std::size_t>(std::floor(d.alpha0 * nd));
      if (k < 1) throw std::invalid_argument("hc_star: need floor(alpha0 * n) >= 1");
      const Interval iv{u[0], u[k - 1]};
      // (U_(1), U_(k)) is empty for k = 1: boundary-limit convention.
      if (!(iv.a < iv.b)) return wrap(SupLocation{0.0, iv.a}, d);
      return wrap(sup_weighted_positive(u, sdp, iv), d);
    }
    case StatisticFamily::ks_two_sided:
      return wrap(sup_ks(u), d);
  }
  throw std::logic_error("unhandled statistic family");
}

StatisticResult statistic(const Sample& sample, const NullModel& null, const StatisticDescriptor& d) {
  const Sample u = transform_to_uniform(sample, null);
  return statistic_uniform(u.values(), d);
}

EjConstants ej_constants(long long n) {
  if (n < 16) throw std::domain_error("ej_constants: n must be >= 16");
  const double ll = std::log(std::log(static_cast<double>(n)));
  const double lll = std::log(ll);
  return {std::sqrt(2.0 * ll), 2.0 * ll + 0.5 * lll - 0.5 * std::log(4.0 * std::numbers::pi)};
}

double ej_normalize(double value, long long n) {
  const auto c = ej_constants(n);
  return c.a_n * value - c.b_n;
}

}  // namespace gof
