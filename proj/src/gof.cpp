#include "hawkes/gof.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace hawkes {
namespace {

// Streaming per-dimension compensator at that dimension's event times.
// Same-day sources are tracked as a decayed sum; once a day closes, each of
// its events' kernel mass is frozen at the day close and folded into F.
std::vector<std::vector<double>> rescale_exp(const ExpHawkesParams& p,
                                             const EventSeries& s,
                                             const TradingCalendar& cal) {
  p.validate();
  s.validate();
  cal.validate();
  if (p.dims() != s.dims())
    throw std::invalid_argument("params and series dimensions differ");
  const std::size_t M = s.dims();
  const double delta = cal.day_length();

  std::vector<std::vector<std::size_t>> day(M);
  for (std::size_t j = 0; j < M; ++j) {
    day[j].reserve(s.times[j].size());
    for (double t : s.times[j]) day[j].push_back(cal.interval_for_event(t));
  }

  std::vector<std::vector<double>> out(M);
  for (std::size_t i = 0; i < M; ++i) {
    const auto& te_all = s.times[i];
    out[i].resize(te_all.size());
    Vec S(M, 0.0), pos(M, 0.0), F(M, 0.0);
    std::vector<std::size_t> cnt(M, 0), ptr(M, 0);
    std::size_t ei = 0;
    for (std::size_t d = 0; d < cal.day_count(); ++d) {
      const double open = cal.intervals[d].open;
      const double close = cal.intervals[d].close;
      for (std::size_t j = 0; j < M; ++j) pos[j] = open;
      while (ei < te_all.size() && day[i][ei] == d) {
        const double te = te_all[ei];
        double acc = p.mu[i] * (static_cast<double>(d) * delta + (te - open));
        for (std::size_t j = 0; j < M; ++j) {
          const double b = p.beta(i, j);
          auto& sj = S[j];
          while (ptr[j] < s.times[j].size() && day[j][ptr[j]] == d &&
                 s.times[j][ptr[j]] < te) {
            const double ts = s.times[j][ptr[j]];
            sj = sj * std::exp(-b * (ts - pos[j])) + 1.0;
            pos[j] = ts;
            ++cnt[j];
            ++ptr[j];
          }
          const double decayed = sj * std::exp(-b * (te - pos[j]));
          acc += p.alpha(i, j) * (F[j] + static_cast<double>(cnt[j]) - decayed);
        }
        out[i][ei] = acc;
        ++ei;
      }
      for (std::size_t j = 0; j < M; ++j) {
        const double b = p.beta(i, j);
        while (ptr[j] < s.times[j].size() && day[j][ptr[j]] == d) {
          const double ts = s.times[j][ptr[j]];
          S[j] = S[j] * std::exp(-b * (ts - pos[j])) + 1.0;
          pos[j] = ts;
          ++cnt[j];
          ++ptr[j];
        }
        const double at_close = S[j] * std::exp(-b * (close - pos[j]));
        F[j] += static_cast<double>(cnt[j]) - at_close;
        S[j] = 0.0;
        cnt[j] = 0;
      }
    }
    for (std::size_t k = 1; k < out[i].size(); ++k)
      if (!(out[i][k] > out[i][k - 1]))
        throw InfeasibleLikelihood("compensator is not strictly increasing between events");
  }
  return out;
}

std::vector<std::vector<double>> rescale_bow(const BowsherParams& p, const EventSeries& s,
                                             const TradingCalendar& cal) {
  p.validate();
  s.validate();
  cal.validate();
  if (s.dims() != 1)
    throw std::invalid_argument("overnight-memory model requires a 1-dimensional series");
  const auto& times = s.times[0];
  const double delta = cal.day_length();

  std::vector<std::size_t> day;
  day.reserve(times.size());
  for (double t : times) day.push_back(cal.interval_for_event(t));

  std::vector<double> res;
  res.reserve(times.size());
  double frozen = 0.0;        // completed days' integrated intensity (minus baseline)
  double lt_close_prev = 0.0; // excess intensity at the previous close
  std::size_t k = 0;
  for (std::size_t d = 0; d < cal.day_count(); ++d) {
    const double open = cal.intervals[d].open;
    const double x_open = static_cast<double>(d) * delta;
    const double spill = p.pi * lt_close_prev;
    double S = 0.0;
    double pos = x_open;
    std::size_t cnt = 0;
    while (k < times.size() && day[k] == d) {
      const double x = x_open + (times[k] - open);
      const double decayed = S * std::exp(-p.beta * (x - pos));
      res.push_back(p.mu * x + frozen +
                    spill / p.rho * (-std::expm1(-p.rho * (x - x_open))) +
                    p.alpha / p.beta * (static_cast<double>(cnt) - decayed));
      S = decayed + 1.0;
      pos = x;
      ++cnt;
      ++k;
    }
    const double at_close = S * std::exp(-p.beta * (x_open + delta - pos));
    frozen += spill / p.rho * (-std::expm1(-p.rho * delta)) +
              p.alpha / p.beta * (static_cast<double>(cnt) - at_close);
    lt_close_prev = spill * std::exp(-p.rho * delta) + p.alpha * at_close;
  }
  for (std::size_t i = 1; i < res.size(); ++i)
    if (!(res[i] > res[i - 1]))
      throw InfeasibleLikelihood("compensator is not strictly increasing between events");
  return {std::move(res)};
}

}  // namespace

std::vector<std::vector<double>>
rescale_times(const std::variant<ExpHawkesParams, BowsherParams>& params,
              const EventSeries& series, const TradingCalendar* calendar) {
  if (std::holds_alternative<ExpHawkesParams>(params)) {
    const auto& p = std::get<ExpHawkesParams>(params);
    if (calendar != nullptr) return rescale_exp(p, series, *calendar);
    series.validate();
    return rescale_exp(p, series, TradingCalendar::single(0.0, series.horizon));
  }
  if (calendar == nullptr)
    throw std::invalid_argument("overnight-memory rescaling requires a calendar");
  return rescale_bow(std::get<BowsherParams>(params), series, *calendar);
}

KsResult ks_exp1(const std::vector<double>& durations) {
  if (durations.size() < 10)
    throw std::invalid_argument("ks_exp1 requires at least 10 durations");
  for (double d : durations)
    if (!(d > 0.0) || !std::isfinite(d))
      throw std::invalid_argument("ks_exp1 requires positive finite durations");

  std::vector<double> x = durations;
  std::sort(x.begin(), x.end());
  const double n = static_cast<double>(x.size());
  double dmax = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double cdf = -std::expm1(-x[i]);
    dmax = std::max(dmax, std::max(cdf - static_cast<double>(i) / n,
                                   static_cast<double>(i + 1) / n - cdf));
  }
  const double arg = std::sqrt(n) * dmax;
  double p = 0.0;
  double sign = 1.0;
  for (int j = 1; j <= 100; ++j) {
    const double term = std::exp(-2.0 * j * j * arg * arg);
    p += sign * term;
    sign = -sign;
    if (term < 1e-12) break;
  }
  p = std::clamp(2.0 * p, 0.0, 1.0);
  return {dmax, p, x.size()};
}

std::vector<QqPoint> qq_points(const std::vector<double>& durations) {
  std::vector<double> x = durations;
  std::sort(x.begin(), x.end());
  const double n = static_cast<double>(x.size());
  std::vector<QqPoint> out;
  out.reserve(x.size());
  for (std::size_t k = 0; k < x.size(); ++k) {
    const double pk = (static_cast<double>(k) + 0.5) / n;
    out.push_back({-std::log1p(-pk), x[k]});
  }
  return out;
}

InterarrivalStats interarrival_stats(const EventSeries& series, std::size_t i) {
  series.validate();
  if (i >= series.dims()) throw std::invalid_argument("dimension index out of range");
  const auto& t = series.times[i];
  if (t.size() < 2)
    throw std::invalid_argument("interarrival_stats requires at least two events");

  std::vector<double> gaps;
  gaps.reserve(t.size() - 1);
  for (std::size_t k = 1; k < t.size(); ++k) gaps.push_back(t[k] - t[k - 1]);

  InterarrivalStats st;
  st.count = t.size();
  double mean = 0.0;
  for (double g : gaps) mean += g;
  mean /= static_cast<double>(gaps.size());
  st.mean = mean;
  if (gaps.size() > 1) {
    double ss = 0.0;
    for (double g : gaps) ss += (g - mean) * (g - mean);
    st.std_dev = std::sqrt(ss / static_cast<double>(gaps.size() - 1));
  }
  std::sort(gaps.begin(), gaps.end());
  auto quantile = [&](double p) {
    const double h = (static_cast<double>(gaps.size()) - 1.0) * p;
    const std::size_t lo = static_cast<std::size_t>(h);
    const double frac = h - static_cast<double>(lo);
    if (lo + 1 >= gaps.size()) return gaps.back();
    return gaps[lo] + frac * (gaps[lo + 1] - gaps[lo]);
  };
  st.q1 = quantile(0.25);
  st.median = quantile(0.5);
  st.q3 = quantile(0.75);
  return st;
}

}  // namespace hawkes
