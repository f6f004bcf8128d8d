#include "hawkes/types.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace hawkes {
namespace {

void require(bool ok, const std::string& msg) {
  if (!ok) throw std::invalid_argument(msg);
}

}  // namespace

void EventSeries::validate() const {
  require(!times.empty(), "EventSeries: at least one dimension required");
  require(std::isfinite(horizon) && horizon > 0.0,
          "EventSeries: horizon must be positive and finite");
  for (std::size_t i = 0; i < times.size(); ++i) {
    const auto& t = times[i];
    for (std::size_t k = 0; k < t.size(); ++k) {
      require(std::isfinite(t[k]) && t[k] >= 0.0 && t[k] <= horizon,
              "EventSeries: dimension " + std::to_string(i) + " event " +
                  std::to_string(k) + " outside [0, horizon]");
      require(k == 0 || t[k] > t[k - 1],
              "EventSeries: dimension " + std::to_string(i) +
                  " timestamps must be strictly increasing at index " + std::to_string(k));
    }
  }
}

void ExpHawkesParams::validate() const {
  const std::size_t m = mu.size();
  require(m > 0, "ExpHawkesParams: empty mu");
  require(alpha.rows == m && alpha.cols == m, "ExpHawkesParams: alpha must be dims x dims");
  require(beta.rows == m && beta.cols == m, "ExpHawkesParams: beta must be dims x dims");
  for (double v : mu)
    require(std::isfinite(v) && v >= 0.0, "ExpHawkesParams: mu entries must be >= 0");
  for (double v : alpha.data)
    require(std::isfinite(v) && v >= 0.0, "ExpHawkesParams: alpha entries must be >= 0");
  for (double v : beta.data)
    require(std::isfinite(v) && v > 0.0, "ExpHawkesParams: beta entries must be > 0");
}

double TradingCalendar::day_length() const {
  require(!intervals.empty(), "TradingCalendar: empty");
  return intervals.front().close - intervals.front().open;
}

void TradingCalendar::validate() const {
  require(!intervals.empty(), "TradingCalendar: at least one interval required");
  const double len = intervals.front().close - intervals.front().open;
  require(std::isfinite(len) && len > 0.0, "TradingCalendar: interval length must be positive");
  for (std::size_t d = 0; d < intervals.size(); ++d) {
    const auto& iv = intervals[d];
    require(std::isfinite(iv.open) && std::isfinite(iv.close) && iv.open < iv.close &&
                iv.open >= 0.0,
            "TradingCalendar: interval " + std::to_string(d) +
                " must have 0 <= open < close");
    require(std::abs((iv.close - iv.open) - len) <= 1e-9 * std::max(1.0, len),
            "TradingCalendar: all intervals must share one length");
    require(d == 0 || intervals[d - 1].close <= iv.open,
            "TradingCalendar: intervals must be increasing and disjoint");
  }
}

bool TradingCalendar::contains(double t) const {
  // First interval with close > t; inside iff its open <= t.
  auto it = std::upper_bound(intervals.begin(), intervals.end(), t,
                             [](double v, const Interval& iv) { return v < iv.close; });
  return it != intervals.end() && it->open <= t;
}

std::size_t TradingCalendar::interval_for_event(double t) const {
  auto it = std::upper_bound(intervals.begin(), intervals.end(), t,
                             [](double v, const Interval& iv) { return v < iv.close; });
  if (it == intervals.end()) {
    if (!intervals.empty() && t == intervals.back().close)
      return intervals.size() - 1;
    throw std::invalid_argument("event at t=" + std::to_string(t) +
                                " is outside all trading intervals");
  }
  if (t < it->open)
    throw std::invalid_argument("event at t=" + std::to_string(t) +
                                " falls in a session gap");
  return static_cast<std::size_t>(it - intervals.begin());
}

double TradingCalendar::trading_time_before(double t) const {
  double acc = 0.0;
  for (const auto& iv : intervals) {
    if (t <= iv.open) break;
    acc += std::min(t, iv.close) - iv.open;
  }
  return acc;
}

TradingCalendar TradingCalendar::single(double open, double close) {
  TradingCalendar c;
  c.intervals.push_back({open, close});
  c.validate();
  return c;
}

void BowsherParams::validate() const {
  require(std::isfinite(mu) && mu >= 0.0, "BowsherParams: mu must be >= 0");
  require(std::isfinite(pi) && pi >= 0.0, "BowsherParams: pi must be >= 0");
  require(std::isfinite(rho) && rho > 0.0, "BowsherParams: rho must be > 0");
  require(std::isfinite(alpha) && alpha >= 0.0, "BowsherParams: alpha must be >= 0");
  require(std::isfinite(beta) && beta > 0.0, "BowsherParams: beta must be > 0");
}

}  // namespace hawkes
