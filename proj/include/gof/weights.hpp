#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace gof {

// Built-in weight functions q on (0,1).
//
//   efkp_loglog       sqrt(u(1-u) loglog(1/(u(1-u))))           b = sqrt(2)
//   sdp               sqrt(u(1-u))                               not upper-class
//   chibisov_oreilly  (u(1-u))^(1/2 - nu),  0 < nu < 1/2         b = 0
//   loglog_power      sqrt(u(1-u)) (loglog(1/(u(1-u))))^(1/2+s)  b = 0
//
// u(1-u) <= 1/4, so the log-log argument is at least 4 and log log is
// always defined and positive on (0,1).
enum class WeightKind { efkp_loglog, sdp, chibisov_oreilly, loglog_power };

double q_efkp_loglog(double u);
double q_sdp(double u);
double q_chibisov_oreilly(double u, double nu);
double q_loglog_power(double u, double sigma);

class WeightFunction {
 public:
  static WeightFunction efkp_loglog();
  static WeightFunction sdp();
  static WeightFunction chibisov_oreilly(double nu);
  static WeightFunction loglog_power(double sigma);

  // Parses the CLI grammar: efkp-loglog | sdp | chibisov-oreilly:NU | loglog-power:SIGMA.
  static WeightFunction parse(std::string_view text);

  // Checked evaluation; throws std::domain_error unless 0 < u < 1.
  double operator()(double u) const;

  // Evaluation from v = u(1-u) in (0, 1/4]. Lets callers that hold the
  // small tail coordinate avoid forming 1 - (1 - y).
  double from_variance(double v) const noexcept;

  double evaluate_unchecked(double u) const noexcept { return from_variance(u * (1.0 - u)); }

  WeightKind kind() const noexcept { return kind_; }
  // nu for chibisov_oreilly, sigma for loglog_power, absent otherwise.
  std::optional<double> parameter() const noexcept { return param_; }
  // Canonical CLI name, e.g. "chibisov-oreilly:0.25".
  const std::string& name() const noexcept { return name_; }
  // End of the initial nondecreasing stretch: q is nondecreasing on
  // (0, split_point()] and, by symmetry, nonincreasing on [1 - split_point(), 1).
  // 1/2 for sdp and chibisov-oreilly; below 1/2 for the loglog weights,
  // which dip to a local minimum at 1/2.
  double split_point() const noexcept { return breakpoints_.front(); }
  // Sorted points in (0,1) where q switches between increasing and
  // decreasing; q is monotone between consecutive entries.
  const std::vector<double>& monotone_breakpoints() const noexcept { return breakpoints_; }
  bool symmetric() const noexcept { return true; }
  // Known almost-sure limsup constant of |B(u)|/q(u) at the endpoints.
  std::optional<double> efkp_b() const noexcept;

  friend bool operator==(const WeightFunction& a, const WeightFunction& b) {
    return a.kind_ == b.kind_ && a.param_ == b.param_;
  }

 private:
  WeightFunction(WeightKind kind, std::optional<double> param);

  WeightKind kind_;
  std::optional<double> param_;
  std::string name_;
  std::vector<double> breakpoints_;
};

enum class ProbeVerdict { converged, diverging, inconclusive };
enum class EfkpVerdict { likely_efkp, likely_not_efkp, inconclusive };

std::string_view to_string(ProbeVerdict v) noexcept;
std::string_view to_string(EfkpVerdict v) noexcept;

struct IntegralProbe {
  double c = 0.0;
  std::vector<double> epsilons;        // shrinking truncation schedule
  std::vector<double> partial_values;  // integral over [eps_k, 1 - eps_k]
  ProbeVerdict verdict = ProbeVerdict::inconclusive;
  double tolerance = 1e-6;
  // Fitted exponent p of the increments, modelled as k^(-p) in the schedule
  // index. p > 1 means summable increments.
  double decay_exponent = 0.0;
  // Only filled by integral_E: whether q(x)/sqrt(x) keeps growing at both ends.
  std::optional<bool> side_condition;
  std::vector<double> side_ratios;  // min of left/right ratios per schedule step
};

struct ProbeSchedule {
  std::vector<double> epsilons;
  double tolerance = 1e-6;

  // eps_k = 10^-k, k = 2..12, relative tolerance 1e-6.
  static ProbeSchedule standard();
};

// I(q,c) = int_0^1 (x(1-x))^-1 exp(-c q(x)^2 / (x(1-x))) dx
IntegralProbe integral_I(const WeightFunction& q, double c,
                         const ProbeSchedule& schedule = ProbeSchedule::standard());

// E(q,c) = int_0^1 (x(1-x))^-3/2 q(x) exp(-c q(x)^2 / (x(1-x))) dx, plus the
// growth check of q(x)/sqrt(x) at both endpoints.
IntegralProbe integral_E(const WeightFunction& q, double c,
                         const ProbeSchedule& schedule = ProbeSchedule::standard());

struct EfkpProbeResult {
  EfkpVerdict verdict = EfkpVerdict::inconclusive;
  std::vector<IntegralProbe> per_c;
};

EfkpProbeResult is_efkp_probe(const WeightFunction& q, const std::vector<double>& c_grid,
                              const ProbeSchedule& schedule = ProbeSchedule::standard());

}  // namespace gof
