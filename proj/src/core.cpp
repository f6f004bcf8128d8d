#include "hawkes/core.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace hawkes {
namespace {

void check_args(const ExpHawkesParams& params, const EventSeries& series, double t,
                std::size_t i) {
  params.validate();
  series.validate();
  if (params.dims() != series.dims())
    throw std::invalid_argument("params and series dimensions differ");
  if (i >= series.dims()) throw std::invalid_argument("dimension index out of range");
  if (!(t >= 0.0) || t > series.horizon)
    throw std::invalid_argument("t=" + std::to_string(t) + " outside [0, horizon]");
}

}  // namespace

double intensity_at(const ExpHawkesParams& params, const EventSeries& series, double t,
                    std::size_t i, const TradingCalendar* calendar) {
  check_args(params, series, t, i);
  if (calendar != nullptr) {
    calendar->validate();
    if (!calendar->contains(t)) return 0.0;
  }
  double lam = params.mu[i];
  for (std::size_t j = 0; j < series.dims(); ++j) {
    const double a = params.alpha(i, j);
    if (a == 0.0) continue;
    const double b = params.beta(i, j);
    double acc = 0.0;
    for (double tk : series.times[j]) {
      if (tk >= t) break;
      acc += std::exp(-b * (t - tk));
    }
    lam += a * b * acc;
  }
  return lam;
}

double compensator_at(const ExpHawkesParams& params, const EventSeries& series, double t,
                      std::size_t i, const TradingCalendar* calendar) {
  check_args(params, series, t, i);
  double total;
  if (calendar == nullptr) {
    total = params.mu[i] * t;
  } else {
    calendar->validate();
    total = params.mu[i] * calendar->trading_time_before(t);
  }
  for (std::size_t j = 0; j < series.dims(); ++j) {
    const double a = params.alpha(i, j);
    if (a == 0.0) continue;
    const double b = params.beta(i, j);
    double acc = 0.0;
    for (double tk : series.times[j]) {
      if (tk >= t) break;
      // Each event's kernel mass accrues until its own day's close and is
      // frozen afterwards; without a calendar it accrues until t.
      double cap = t;
      if (calendar != nullptr) {
        const std::size_t d = calendar->interval_for_event(tk);
        cap = std::min(t, calendar->intervals[d].close);
      }
      acc += -std::expm1(-b * (cap - tk));
    }
    total += a * acc;
  }
  return total;
}

Mat branching_matrix(const ExpHawkesParams& params) {
  params.validate();
  return params.alpha;
}

StabilityResult stability_check(const ExpHawkesParams& params) {
  params.validate();
  const Mat& a = params.alpha;
  const std::size_t m = a.rows;

  Vec v(m, 1.0 / std::sqrt(static_cast<double>(m)));
  Vec w(m, 0.0);
  double prev = -1.0;
  for (int iter = 0; iter < 1000; ++iter) {
    for (std::size_t r = 0; r < m; ++r) {
      double s = 0.0;
      for (std::size_t c = 0; c < m; ++c) s += a(r, c) * v[c];
      w[r] = s;
    }
    double norm = 0.0;
    for (double x : w) norm += x * x;
    norm = std::sqrt(norm);
    if (norm == 0.0) return {0.0, true, true};
    if (std::abs(norm - prev) < 1e-10) return {norm, norm < 1.0, true};
    prev = norm;
    for (std::size_t r = 0; r < m; ++r) v[r] = w[r] / norm;
  }
  // Power iteration did not settle (e.g. complex dominant pair); report the
  // max row sum, a valid upper bound for a non-negative matrix.
  double bound = 0.0;
  for (std::size_t r = 0; r < m; ++r) {
    double s = 0.0;
    for (std::size_t c = 0; c < m; ++c) s += a(r, c);
    bound = std::max(bound, s);
  }
  return {bound, bound < 1.0, false};
}

}  // namespace hawkes
