#include "gof/hc_asymptotics.hpp"

#include <json.hpp>

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <stdexcept>

using namespace gof;

TEST_CASE("extreme-value targets") {
  CHECK(ev_target_cdf(EvTarget::one_sided_partial, 0.0) == doctest::Approx(0.6065306597126334).epsilon(1e-14));
  CHECK(ev_target_cdf(EvTarget::two_sided_partial, 0.0) == doctest::Approx(0.36787944117144233).epsilon(1e-14));
  CHECK(ev_target_cdf(EvTarget::one_sided_full, 0.0) == doctest::Approx(0.1353352832366127).epsilon(1e-14));
  for (auto t : {EvTarget::one_sided_partial, EvTarget::two_sided_partial, EvTarget::one_sided_full})
    for (double p : {0.01, 0.3, 0.5, 0.99}) CHECK(ev_target_cdf(t, ev_target_quantile(t, p)) == doctest::Approx(p));
  // Median of the one-sided target: -log(2 log 2).
  CHECK(ev_target_quantile(EvTarget::one_sided_partial, 0.5) == doctest::Approx(-std::log(2.0 * std::log(2.0))));
  CHECK_THROWS_AS(ev_target_quantile(EvTarget::one_sided_full, 1.0), std::domain_error);
}

TEST_CASE("normalized HC replicates") {
  const auto small = simulate_normalized_hc(2000, 200, 0.1, Sidedness::one, 8, 0);
  const auto large = simulate_normalized_hc(2000, 200, 0.9, Sidedness::one, 8, 0);
  const auto two = simulate_normalized_hc(2000, 200, 0.9, Sidedness::two, 8, 0);
  CHECK(small.normalized_values.size() == 200);
  CHECK(std::is_sorted(small.normalized_values.begin(), small.normalized_values.end()));
  for (double v : small.normalized_values) CHECK(std::isfinite(v));
  CHECK(small.ks_distance >= 0.0);
  CHECK(small.ks_distance <= 1.0);
  CHECK(two.target == EvTarget::two_sided_partial);
  // Shared data across alpha0: pointwise nested sups, hence sorted order too.
  for (std::size_t i = 0; i < small.normalized_values.size(); ++i) {
    CHECK(small.normalized_values[i] <= large.normalized_values[i]);
    CHECK(large.normalized_values[i] <= two.normalized_values[i]);
  }
  for (double u : small.argmax_u) CHECK(u <= 0.1);
  CHECK(ks_distance_two_sample(small.normalized_values, large.normalized_values) <= 1.0);

  const auto again = simulate_normalized_hc(2000, 200, 0.1, Sidedness::one, 8, 1);
  CHECK(again.normalized_values == small.normalized_values);
  CHECK(again.argmax_u == small.argmax_u);

  CHECK_THROWS_AS(simulate_normalized_hc(15, 10, 0.1, Sidedness::one, 1), std::invalid_argument);
  CHECK_THROWS_AS(simulate_normalized_hc(100, 10, 1.0, Sidedness::one, 1), std::invalid_argument);
}

TEST_CASE("full-interval variant") {
  const auto full = simulate_normalized_hc_full(1000, 100, 3, 0);
  CHECK(full.target == EvTarget::one_sided_full);
  const auto part = simulate_normalized_hc(1000, 100, 0.5, Sidedness::one, 3, 0);
  for (std::size_t i = 0; i < 100; ++i) CHECK(part.normalized_values[i] <= full.normalized_values[i]);
}

TEST_CASE("two-sample KS distance") {
  CHECK(ks_distance_two_sample({1, 2, 3}, {1, 2, 3}) == 0.0);
  CHECK(ks_distance_two_sample({1, 2}, {3, 4}) == 1.0);
  CHECK(ks_distance_two_sample({1, 3}, {2, 4}) == doctest::Approx(0.5));
  CHECK_THROWS(ks_distance_two_sample({}, {1.0}));
}

TEST_CASE("argmax location study") {
  CHECK(argmax_location_study(500, 50, 0.99, 1) == 1.0);
  const double sdp = argmax_location_study(20000, 200, 0.1, 5);
  const double loglog = argmax_location_study(20000, 200, 0.1, 5, WeightFunction::efkp_loglog());
  CHECK(sdp >= 0.0);
  CHECK(sdp <= 1.0);
  CAPTURE(sdp);
  CAPTURE(loglog);
  CHECK(loglog < sdp);
}

TEST_CASE("JSON report") {
  const auto c = simulate_normalized_hc(500, 40, 0.2, Sidedness::two, 77, 1);
  const auto j = nlohmann::json::parse(ev_comparison_to_json(c));
  CHECK(j.at("seed").get<std::uint64_t>() == 77);
  CHECK(j.at("n").get<int>() == 500);
  CHECK(j.at("M").get<int>() == 40);
  CHECK(j.at("alpha0").get<double>() == 0.2);
  CHECK(j.at("sided").get<std::string>() == "two");
  CHECK(j.at("quantiles").at("0.50").at("target").get<double>() ==
        doctest::Approx(ev_target_quantile(EvTarget::two_sided_partial, 0.5)));
}
