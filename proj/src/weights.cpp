#include "gof/weights.hpp"

#include <algorithm>
#include <cassert>
#include <charconv>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>

namespace gof {

namespace {

void require_open_unit(double u, const char* what) {
  if (!(u > 0.0 && u < 1.0)) throw std::domain_error(std::string(what) + ": u must lie in (0,1)");
}

double loglog_of_inverse(double v) {
  // v = u(1-u) <= 1/4, so 1/v >= 4 and log(1/v) >= log 4 > 1.
  const double l = std::log(1.0 / v);
  assert(l > 1.0);
  return std::log(l);
}

std::string format_param(double x) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

double parse_param(std::string_view text, std::string_view full) {
  double v = 0.0;
  auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (res.ec != std::errc() || res.ptr != text.data() + text.size())
    throw std::invalid_argument("bad weight parameter in '" + std::string(full) + "'");
  return v;
}

}  // namespace

double q_efkp_loglog(double u) {
  require_open_unit(u, "q_efkp_loglog");
  return WeightFunction::efkp_loglog().evaluate_unchecked(u);
}

double q_sdp(double u) {
  require_open_unit(u, "q_sdp");
  return std::sqrt(u * (1.0 - u));
}

double q_chibisov_oreilly(double u, double nu) {
  require_open_unit(u, "q_chibisov_oreilly");
  return WeightFunction::chibisov_oreilly(nu).evaluate_unchecked(u);
}

double q_loglog_power(double u, double sigma) {
  require_open_unit(u, "q_loglog_power");
  return WeightFunction::loglog_power(sigma).evaluate_unchecked(u);
}

WeightFunction::WeightFunction(WeightKind kind, std::optional<double> param)
    : kind_(kind), param_(param) {
  switch (kind_) {
    case WeightKind::efkp_loglog: name_ = "efkp-loglog"; break;
    case WeightKind::sdp: name_ = "sdp"; break;
    case WeightKind::chibisov_oreilly: name_ = "chibisov-oreilly:" + format_param(*param_); break;
    case WeightKind::loglog_power: name_ = "loglog-power:" + format_param(*param_); break;
  }
  // q^2 = v * (log L)^k with L = log(1/v) has d(log q^2)/dv proportional to
  // L log L - k, so on (0, 1/4] it peaks where L log L = k and has a local
  // minimum at v = 1/4 (u = 1/2) whenever that root exceeds log 4.
  const bool loglog = kind_ == WeightKind::efkp_loglog || kind_ == WeightKind::loglog_power;
  if (!loglog) {
    breakpoints_ = {0.5};
    return;
  }
  const double k = kind_ == WeightKind::efkp_loglog ? 1.0 : 1.0 + 2.0 * *param_;
  double L = std::max(2.0, k);
  for (int it = 0; it < 100; ++it) {
    const double step = (L * std::log(L) - k) / (std::log(L) + 1.0);
    L -= step;
    if (std::fabs(step) <= 1e-15 * L) break;
  }
  const double v = std::exp(-L);
  const double u1 = 2.0 * v / (1.0 + std::sqrt(1.0 - 4.0 * v));
  breakpoints_ = {u1, 0.5, 1.0 - u1};
}

WeightFunction WeightFunction::efkp_loglog() { return {WeightKind::efkp_loglog, std::nullopt}; }
WeightFunction WeightFunction::sdp() { return {WeightKind::sdp, std::nullopt}; }

WeightFunction WeightFunction::chibisov_oreilly(double nu) {
  if (!(nu > 0.0 && nu < 0.5))
    throw std::domain_error("chibisov_oreilly: nu must lie in (0, 1/2)");
  return {WeightKind::chibisov_oreilly, nu};
}

WeightFunction WeightFunction::loglog_power(double sigma) {
  if (!(sigma > 0.0) || !std::isfinite(sigma))
    throw std::domain_error("loglog_power: sigma must be positive");
  return {WeightKind::loglog_power, sigma};
}

WeightFunction WeightFunction::parse(std::string_view text) {
  const auto colon = text.find(':');
  const std::string_view head = text.substr(0, colon);
  const bool has_param = colon != std::string_view::npos;
  if (head == "efkp-loglog" && !has_param) return efkp_loglog();
  if (head == "sdp" && !has_param) return sdp();
  if (head == "chibisov-oreilly" && has_param)
    return chibisov_oreilly(parse_param(text.substr(colon + 1), text));
  if (head == "loglog-power" && has_param)
    return loglog_power(parse_param(text.substr(colon + 1), text));
  throw std::invalid_argument("unknown weight '" + std::string(text) + "'");
}

double WeightFunction::operator()(double u) const {
  require_open_unit(u, name_.c_str());
  return evaluate_unchecked(u);
}

double WeightFunction::from_variance(double v) const noexcept {
  switch (kind_) {
    case WeightKind::efkp_loglog:
      return std::sqrt(v * loglog_of_inverse(v));
    case WeightKind::sdp:
      return std::sqrt(v);
    case WeightKind::chibisov_oreilly:
      return std::pow(v, 0.5 - *param_);
    case WeightKind::loglog_power:
      return std::sqrt(v) * std::pow(loglog_of_inverse(v), 0.5 + *param_);
  }
  return 0.0;
}

std::optional<double> WeightFunction::efkp_b() const noexcept {
  switch (kind_) {
    case WeightKind::efkp_loglog: return std::sqrt(2.0);
    case WeightKind::sdp: return std::nullopt;
    case WeightKind::chibisov_oreilly:
    case WeightKind::loglog_power: return 0.0;
  }
  return std::nullopt;
}

std::string_view to_string(ProbeVerdict v) noexcept {
  switch (v) {
    case ProbeVerdict::converged: return "converged";
    case ProbeVerdict::diverging: return "diverging";
    case ProbeVerdict::inconclusive: return "inconclusive";
  }
  return "?";
}

std::string_view to_string(EfkpVerdict v) noexcept {
  switch (v) {
    case EfkpVerdict::likely_efkp: return "likely-EFKP";
    case EfkpVerdict::likely_not_efkp: return "likely-not-EFKP";
    case EfkpVerdict::inconclusive: return "inconclusive";
  }
  return "?";
}

ProbeSchedule ProbeSchedule::standard() {
  ProbeSchedule s;
  for (int k = 2; k <= 12; ++k) s.epsilons.push_back(std::pow(10.0, -k));
  return s;
}

namespace {

using Integrand = std::function<double(double)>;

double checked(double v) {
  if (!std::isfinite(v)) throw std::runtime_error("integral probe: non-finite integrand value");
  return v;
}

double simpson_step(const Integrand& g, double a, double fa, double b, double fb, double whole,
                    double fm, double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = checked(g(lm));
  const double frm = checked(g(rm));
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (depth <= 0 || std::fabs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
  return simpson_step(g, a, fa, m, fm, left, flm, 0.5 * tol, depth - 1) +
         simpson_step(g, m, fm, b, fb, right, frm, 0.5 * tol, depth - 1);
}

double adaptive_simpson(const Integrand& g, double a, double b, double rel_tol) {
  const double fa = checked(g(a));
  const double fb = checked(g(b));
  const double m = 0.5 * (a + b);
  const double fm = checked(g(m));
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  const double tol = rel_tol * std::max(std::fabs(whole), 1e-300);
  return simpson_step(g, a, fa, b, fb, whole, fm, tol, 48);
}

// int_lo^hi f(y) dy for 0 < lo < hi, as log-spaced panels in s = log y.
double log_panel_integral(const std::function<double(double)>& f, double lo, double hi) {
  const double s_lo = std::log(lo);
  const double s_hi = std::log(hi);
  const int panels = std::max(1, static_cast<int>(std::ceil((s_hi - s_lo) / std::log(10.0))));
  const double width = (s_hi - s_lo) / panels;
  Integrand g = [&f](double s) {
    const double y = std::exp(s);
    return f(y) * y;
  };
  double total = 0.0;
  for (int i = 0; i < panels; ++i) {
    const double a = s_lo + width * i;
    const double b = i + 1 == panels ? s_hi : a + width;
    total += adaptive_simpson(g, a, b, 1e-11);
  }
  return total;
}

// Least-squares slope of log(increment) against log(log(1/eps)), negated.
double fit_decay_exponent(const std::vector<double>& eps, const std::vector<double>& inc) {
  const std::size_t m = std::min<std::size_t>(4, inc.size());
  if (m < 2) return 0.0;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  std::size_t used = 0;
  for (std::size_t j = inc.size() - m; j < inc.size(); ++j) {
    if (!(inc[j] > 0.0)) continue;
    const double x = std::log(std::log(1.0 / eps[j + 1]));
    const double y = std::log(inc[j]);
    sx += x; sy += y; sxx += x * x; sxy += x * y;
    ++used;
  }
  if (used < 2) return std::numeric_limits<double>::infinity();  // increments vanished
  const double denom = used * sxx - sx * sx;
  if (denom == 0.0) return 0.0;
  return -(used * sxy - sx * sy) / denom;
}

// Integrand is given in the tail coordinate y in (0, 1/2]: both halves of
// (0,1) are folded onto it, f(y) = h(y) + h(1 - y).
IntegralProbe run_probe(double c, const ProbeSchedule& schedule,
                        const std::function<double(double)>& folded) {
  if (!(c > 0.0)) throw std::domain_error("integral probe: c must be positive");
  const auto& eps = schedule.epsilons;
  if (eps.size() < 2) throw std::invalid_argument("integral probe: schedule needs >= 2 points");
  for (std::size_t k = 0; k < eps.size(); ++k) {
    if (!(eps[k] > 0.0 && eps[k] < 0.5)) throw std::invalid_argument("integral probe: eps must lie in (0,1/2)");
    if (k > 0 && !(eps[k] < eps[k - 1]))
      throw std::invalid_argument("integral probe: schedule must be strictly decreasing");
  }

  IntegralProbe probe;
  probe.c = c;
  probe.epsilons = eps;
  probe.tolerance = schedule.tolerance;

  double partial = log_panel_integral(folded, eps.front(), 0.5);
  probe.partial_values.push_back(partial);
  std::vector<double> increments;
  for (std::size_t k = 1; k < eps.size(); ++k) {
    const double inc = log_panel_integral(folded, eps[k], eps[k - 1]);
    assert(inc >= 0.0);
    partial += inc;
    probe.partial_values.push_back(partial);
    increments.push_back(inc);
  }

  probe.decay_exponent = fit_decay_exponent(eps, increments);
  const double last = increments.back();
  const std::size_t m = increments.size();
  const bool non_decreasing = m >= 3 && increments[m - 1] >= increments[m - 2] &&
                              increments[m - 2] >= increments[m - 3];

  // Successive partials agreeing settles it. Otherwise the increments are
  // modelled as a power of log(1/eps): exponent > 1 is a convergent tail,
  // exponent < 1 a divergent one, and the band around 1 stays open.
  if (last <= schedule.tolerance * std::max(partial, 1e-300)) {
    probe.verdict = ProbeVerdict::converged;
  } else if (non_decreasing) {
    probe.verdict = ProbeVerdict::diverging;
  } else if (probe.decay_exponent >= 1.25) {
    probe.verdict = ProbeVerdict::converged;
  } else if (probe.decay_exponent <= 0.9) {
    probe.verdict = ProbeVerdict::diverging;
  } else {
    probe.verdict = ProbeVerdict::inconclusive;
  }
  return probe;
}

double q_at_right(const WeightFunction& q, double y, double v) {
  return q.symmetric() ? q.from_variance(v) : q.evaluate_unchecked(1.0 - y);
}

}  // namespace

IntegralProbe integral_I(const WeightFunction& q, double c, const ProbeSchedule& schedule) {
  auto folded = [&q, c](double y) {
    const double v = y * (1.0 - y);
    const double ql = q.from_variance(v);
    const double qr = q_at_right(q, y, v);
    return (std::exp(-c * ql * ql / v) + std::exp(-c * qr * qr / v)) / v;
  };
  return run_probe(c, schedule, folded);
}

IntegralProbe integral_E(const WeightFunction& q, double c, const ProbeSchedule& schedule) {
  auto folded = [&q, c](double y) {
    const double v = y * (1.0 - y);
    const double ql = q.from_variance(v);
    const double qr = q_at_right(q, y, v);
    return (ql * std::exp(-c * ql * ql / v) + qr * std::exp(-c * qr * qr / v)) / (v * std::sqrt(v));
  };
  IntegralProbe probe = run_probe(c, schedule, folded);

  // q(x)/sqrt(x) at x = eps (left) and q(1-x)/sqrt(1-(1-x)) at x = 1-eps (right).
  bool increasing = true;
  for (double e : schedule.epsilons) {
    const double v = e * (1.0 - e);
    const double left = q.from_variance(v) / std::sqrt(e);
    const double right = q_at_right(q, e, v) / std::sqrt(e);
    const double r = std::min(left, right);
    if (!probe.side_ratios.empty() && !(r > probe.side_ratios.back())) increasing = false;
    probe.side_ratios.push_back(r);
  }
  // Unbounded growth is evidenced by ratios that still move at the last step;
  // a ratio settling to a finite limit (e.g. sqrt(1-x) -> 1) stops moving.
  const auto& rs = probe.side_ratios;
  const double last_rel = (rs.back() - rs[rs.size() - 2]) / rs.back();
  probe.side_condition = increasing && last_rel > 1e-4;
  return probe;
}

EfkpProbeResult is_efkp_probe(const WeightFunction& q, const std::vector<double>& c_grid,
                              const ProbeSchedule& schedule) {
  if (c_grid.empty()) throw std::invalid_argument("is_efkp_probe: empty c grid");
  EfkpProbeResult out;
  bool any_converged = false;
  bool all_diverging = true;
  for (double c : c_grid) {
    out.per_c.push_back(integral_I(q, c, schedule));
    any_converged |= out.per_c.back().verdict == ProbeVerdict::converged;
    all_diverging &= out.per_c.back().verdict == ProbeVerdict::diverging;
  }
  if (any_converged) out.verdict = EfkpVerdict::likely_efkp;
  else if (all_diverging) out.verdict = EfkpVerdict::likely_not_efkp;
  return out;
}

}  // namespace gof
