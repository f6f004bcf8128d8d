#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "hawkes/core.hpp"
#include "hawkes/gof.hpp"
#include "hawkes/optimize.hpp"
#include "hawkes/rng.hpp"
#include "hawkes/simulate.hpp"
#include "helpers.hpp"

using namespace hawkes;

namespace {

ExpHawkesParams params_1d(double mu, double a, double b) {
  ExpHawkesParams p;
  p.mu = {mu};
  p.alpha = Mat(1, 1);
  p.alpha(0, 0) = a;
  p.beta = Mat(1, 1);
  p.beta(0, 0) = b;
  return p;
}

std::vector<double> durations_of(const std::vector<double>& rescaled) {
  std::vector<double> d;
  d.reserve(rescaled.size());
  double prev = 0.0;
  for (double v : rescaled) {
    d.push_back(v - prev);
    prev = v;
  }
  return d;
}

}  // namespace

TEST_CASE("rescaled times equal the compensator at each event") {
  Rng rng(2);
  const auto s = testutil::random_series(rng, 2, 40, 60.0);
  const auto p = testutil::random_stable_params(rng, 2);

  const auto rescaled = rescale_times(p, s);
  for (std::size_t i = 0; i < 2; ++i) {
    REQUIRE(rescaled[i].size() == s.times[i].size());
    for (std::size_t k = 0; k < s.times[i].size(); ++k) {
      const double want = compensator_at(p, s, s.times[i][k], i);
      CHECK(std::abs(rescaled[i][k] - want) <= 1e-9 * std::max(1.0, want));
    }
  }
}

TEST_CASE("rescaled times honour the calendar compensator across days") {
  TradingCalendar cal;
  cal.intervals = {{0.0, 50.0}, {120.0, 170.0}, {300.0, 350.0}};
  Rng rng(44);
  EventSeries s;
  s.times.resize(2);
  s.horizon = 350.0;
  for (std::size_t i = 0; i < 2; ++i) {
    std::vector<double> t;
    for (const auto& iv : cal.intervals)
      for (int k = 0; k < 8; ++k) t.push_back(iv.open + rng.uniform() * 49.0);
    std::sort(t.begin(), t.end());
    t.erase(std::unique(t.begin(), t.end()), t.end());
    s.times[i] = t;
  }
  const auto p = testutil::random_stable_params(rng, 2);

  const auto rescaled = rescale_times(p, s, &cal);
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t k = 0; k < s.times[i].size(); ++k) {
      const double want = compensator_at(p, s, s.times[i][k], i, &cal);
      CHECK(std::abs(rescaled[i][k] - want) <= 1e-9 * std::max(1.0, want));
    }
}

TEST_CASE("overnight-memory rescaling without spill equals the converted kernel rescaling") {
  BowsherParams bp;
  bp.mu = 0.1;
  bp.pi = 0.0;
  bp.rho = 0.5;
  bp.alpha = 0.4;
  bp.beta = 0.8;
  const auto cal = TradingCalendar::single(0.0, 100.0);
  EventSeries s;
  s.times = {{3.0, 17.0, 40.0, 41.0, 77.0}};
  s.horizon = 100.0;

  const auto a = rescale_times(bp, s, &cal);
  const auto b = rescale_times(params_1d(bp.mu, bp.alpha / bp.beta, bp.beta), s, &cal);
  REQUIRE(a[0].size() == b[0].size());
  for (std::size_t k = 0; k < a[0].size(); ++k)
    CHECK(a[0][k] == doctest::Approx(b[0][k]).epsilon(1e-12));
}

TEST_CASE("rescaling with zero intensity is infeasible") {
  ExpHawkesParams p = params_1d(0.0, 0.0, 1.0);
  EventSeries s;
  s.times = {{1.0, 2.0}};
  s.horizon = 5.0;
  CHECK_THROWS_AS(rescale_times(p, s), InfeasibleLikelihood);
}

TEST_CASE("true-model residuals look exponential; the flat model is rejected") {
  const auto truth = params_1d(0.1, 0.5, 1.0);
  SimConfig cfg;
  cfg.seed = 2024;
  cfg.horizon = 7500.0;
  const auto s = simulate_hawkes(truth, cfg);
  REQUIRE(s.total_events() > 1000);

  const auto good = rescale_times(truth, s);
  const KsResult ks_good = ks_exp1(durations_of(good[0]));
  CHECK(ks_good.p_value > 0.01);

  // constant-rate model at the empirical rate: clustering survives rescaling
  const double rate = static_cast<double>(s.total_events()) / s.horizon;
  const auto flat = rescale_times(params_1d(rate, 0.0, 1.0), s);
  const KsResult ks_flat = ks_exp1(durations_of(flat[0]));
  CHECK(ks_flat.p_value < 1e-4);
}

TEST_CASE("KS test needs at least ten durations") {
  std::vector<double> d(9, 1.0);
  CHECK_THROWS_AS(ks_exp1(d), std::invalid_argument);
}

TEST_CASE("KS statistic and p-value on a degenerate sample match hand computation") {
  // all mass at log 2 where the Exp(1) CDF is 1/2: D = 1/2 exactly
  std::vector<double> d(10, std::log(2.0));
  const KsResult ks = ks_exp1(d);
  CHECK(ks.statistic == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(ks.n == 10);

  // independent transcription of the asymptotic series at x = sqrt(10)/2
  const double x = std::sqrt(10.0) * 0.5;
  double p = 0.0;
  for (int j = 1; j <= 100; ++j) {
    const double term = std::exp(-2.0 * j * j * x * x);
    p += (j % 2 == 1 ? 2.0 : -2.0) * term;
    if (term < 1e-12) break;
  }
  CHECK(ks.p_value == doctest::Approx(p).epsilon(1e-10));
}

TEST_CASE("KS p-values are calibrated on the null and powerful off it") {
  int reject_005 = 0;
  int reject_exp2 = 0;
  const int seeds = 500;
  for (int seed = 1; seed <= seeds; ++seed) {
    Rng rng(static_cast<std::uint64_t>(seed));
    std::vector<double> exp1(1000), exp2(1000);
    for (auto& v : exp1) v = rng.exponential(1.0);
    for (auto& v : exp2) v = rng.exponential(2.0);
    if (ks_exp1(exp1).p_value < 0.05) ++reject_005;
    if (ks_exp1(exp2).p_value < 0.001) ++reject_exp2;
  }
  const double frac = static_cast<double>(reject_005) / seeds;
  CHECK(frac >= 0.03);
  CHECK(frac <= 0.08);
  CHECK(reject_exp2 >= static_cast<int>(0.99 * seeds));
}

TEST_CASE("Q-Q points use centered plotting positions against Exp(1)") {
  const std::vector<double> d{8.0, 1.0, 4.0, 2.0};
  const auto pts = qq_points(d);
  REQUIRE(pts.size() == 4);
  const double expected_theo[] = {
      -std::log1p(-0.125), -std::log1p(-0.375), -std::log1p(-0.625), -std::log1p(-0.875)};
  const double expected_emp[] = {1.0, 2.0, 4.0, 8.0};
  for (std::size_t k = 0; k < 4; ++k) {
    CHECK(pts[k].theoretical == doctest::Approx(expected_theo[k]).epsilon(1e-12));
    CHECK(pts[k].empirical == doctest::Approx(expected_emp[k]).epsilon(1e-12));
  }
}

TEST_CASE("Q-Q agreement envelope holds for well-specified residuals") {
  const auto truth = params_1d(0.1, 0.5, 1.0);
  SimConfig cfg;
  cfg.seed = 31337;
  cfg.horizon = 7500.0;
  const auto s = simulate_hawkes(truth, cfg);
  REQUIRE(s.total_events() >= 1000);

  const auto rescaled = rescale_times(truth, s);
  const auto pts = qq_points(durations_of(rescaled[0]));
  const std::size_t n = pts.size();
  double worst = 0.0;
  for (std::size_t k = n / 20; k < n - n / 20; ++k)
    worst = std::max(worst, std::abs(pts[k].empirical - pts[k].theoretical));
  CHECK(worst < 0.25);
}

TEST_CASE("inter-arrival summary matches hand computation") {
  EventSeries s;
  s.times = {{0.0, 1.0, 3.0, 7.0}, {0.0, 60.0, 120.0, 180.0}};
  s.horizon = 200.0;

  const auto a = interarrival_stats(s, 0);
  CHECK(a.count == 4);
  CHECK(a.mean == doctest::Approx(7.0 / 3.0).epsilon(1e-12));
  CHECK(a.median == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(a.q1 == doctest::Approx(1.5).epsilon(1e-12));
  CHECK(a.q3 == doctest::Approx(3.0).epsilon(1e-12));

  const auto b = interarrival_stats(s, 1);
  CHECK(b.count == 4);
  CHECK(b.mean == doctest::Approx(60.0).epsilon(1e-12));
  CHECK(b.std_dev == doctest::Approx(0.0));
  CHECK(b.median == doctest::Approx(60.0).epsilon(1e-12));
}

TEST_CASE("inter-arrival summary rejects short or missing dimensions") {
  EventSeries s;
  s.times = {{1.0}};
  s.horizon = 5.0;
  CHECK_THROWS_AS(interarrival_stats(s, 0), std::invalid_argument);
  CHECK_THROWS_AS(interarrival_stats(s, 1), std::invalid_argument);
}

TEST_CASE("out-of-sample residuals pass when the model is stationary") {
  const auto truth = params_1d(0.1, 0.5, 1.0);
  SimConfig cfg;
  cfg.seed = 5150;
  cfg.horizon = 8000.0;
  const auto s = simulate_hawkes(truth, cfg);

  EventSeries first, second;
  first.horizon = 4000.0;
  second.horizon = 4000.0;
  first.times.resize(1);
  second.times.resize(1);
  for (double t : s.times[0]) {
    if (t < 4000.0)
      first.times[0].push_back(t);
    else
      second.times[0].push_back(t - 4000.0);
  }

  OptimConfig ocfg;
  const FitResult fit = fit_two_stage(first, TradingCalendar::single(0.0, 4000.0), ocfg);
  const auto& fitted = std::get<ExpHawkesParams>(fit.params);

  const auto rescaled = rescale_times(fitted, second);
  const KsResult ks = ks_exp1(durations_of(rescaled[0]));
  CHECK(ks.p_value > 0.01);
}
