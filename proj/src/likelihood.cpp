#include "hawkes/likelihood.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

namespace hawkes {
namespace {

constexpr double kIntensityFloor = 1e-300;

void check_pair(const ExpHawkesParams& params, const EventSeries& series) {
  params.validate();
  series.validate();
  if (params.dims() != series.dims())
    throw std::invalid_argument("params and series dimensions differ");
}

double finite_or_throw(double x) {
  if (!std::isfinite(x)) throw InfeasibleLikelihood("likelihood is not finite");
  return x;
}

double safe_log(double lam) {
  if (!(lam > kIntensityFloor))
    throw InfeasibleLikelihood("non-positive intensity at an observed event");
  return std::log(lam);
}

}  // namespace

RecursionState compute_recursion(const Mat& beta, const EventSeries& series) {
  series.validate();
  const std::size_t M = series.dims();
  if (beta.rows != M || beta.cols != M)
    throw std::invalid_argument("compute_recursion: beta shape mismatch");
  RecursionState st;
  st.R.reserve(M);
  for (std::size_t m = 0; m < M; ++m) {
    const auto& tm = series.times[m];
    Mat r(tm.size(), M, 0.0);
    for (std::size_t n = 0; n < M; ++n) {
      const auto& tn = series.times[n];
      const double b = beta(m, n);
      double acc = 0.0;
      double prev = 0.0;
      std::size_t k = 0;
      for (std::size_t i = 0; i < tm.size(); ++i) {
        const double ti = tm[i];
        if (i > 0) acc *= std::exp(-b * (ti - prev));
        // Source events since the previous target event, strictly before t_i,
        // so an event never excites its own intensity evaluation.
        while (k < tn.size() && tn[k] < ti) {
          acc += std::exp(-b * (ti - tn[k]));
          ++k;
        }
        r(i, n) = acc;
        prev = ti;
      }
    }
    st.R.push_back(std::move(r));
  }
  return st;
}

DaygapTables daygap_tables(const Mat& beta, const EventSeries& series,
                           const TradingCalendar& calendar) {
  calendar.validate();
  const std::size_t M = series.dims();
  RecursionState rec = compute_recursion(beta, series);

  DaygapTables t;
  t.open_seconds = calendar.total_open_seconds();
  t.kernel_integral = Mat(M, M, 0.0);
  t.W.reserve(M);
  for (std::size_t m = 0; m < M; ++m) {
    Mat w = std::move(rec.R[m]);
    for (std::size_t i = 0; i < w.rows; ++i)
      for (std::size_t n = 0; n < M; ++n) w(i, n) *= beta(m, n);
    t.W.push_back(std::move(w));
  }
  for (std::size_t n = 0; n < M; ++n) {
    for (double tk : series.times[n]) {
      const std::size_t d = calendar.interval_for_event(tk);
      const double rem = calendar.intervals[d].close - tk;
      for (std::size_t m = 0; m < M; ++m)
        t.kernel_integral(m, n) += -std::expm1(-beta(m, n) * rem);
    }
  }
  return t;
}

double nll_block(const DaygapTables& tables, std::size_t m, double mu_m,
                 const Vec& alpha_row) {
  const Mat& w = tables.W[m];
  const std::size_t M = w.cols;
  double total = mu_m * tables.open_seconds;
  for (std::size_t n = 0; n < M; ++n)
    total += alpha_row[n] * tables.kernel_integral(m, n);
  for (std::size_t i = 0; i < w.rows; ++i) {
    double lam = mu_m;
    for (std::size_t n = 0; n < M; ++n) lam += alpha_row[n] * w(i, n);
    total -= safe_log(lam);
  }
  return finite_or_throw(total);
}

double nll_daygap(const ExpHawkesParams& params, const EventSeries& series,
                  const TradingCalendar& calendar) {
  check_pair(params, series);
  const std::size_t M = params.dims();
  DaygapTables tables = daygap_tables(params.beta, series, calendar);
  double total = 0.0;
  Vec row(M, 0.0);
  for (std::size_t m = 0; m < M; ++m) {
    for (std::size_t n = 0; n < M; ++n) row[n] = params.alpha(m, n);
    total += nll_block(tables, m, params.mu[m], row);
  }
  return finite_or_throw(total);
}

double nll(const ExpHawkesParams& params, const EventSeries& series) {
  check_pair(params, series);
  return nll_daygap(params, series, TradingCalendar::single(0.0, series.horizon));
}

NllGradient nll_gradient(const ExpHawkesParams& params, const EventSeries& series,
                         const TradingCalendar& calendar) {
  check_pair(params, series);
  const std::size_t M = params.dims();
  DaygapTables tables = daygap_tables(params.beta, series, calendar);

  NllGradient g;
  g.d_mu = Vec(M, tables.open_seconds);
  g.d_alpha = tables.kernel_integral;
  for (std::size_t m = 0; m < M; ++m) {
    const Mat& w = tables.W[m];
    for (std::size_t i = 0; i < w.rows; ++i) {
      double lam = params.mu[m];
      for (std::size_t n = 0; n < M; ++n) lam += params.alpha(m, n) * w(i, n);
      if (!(lam > kIntensityFloor))
        throw InfeasibleLikelihood("non-positive intensity at an observed event");
      const double inv = 1.0 / lam;
      g.d_mu[m] -= inv;
      for (std::size_t n = 0; n < M; ++n) g.d_alpha(m, n) -= w(i, n) * inv;
    }
  }
  return g;
}

Mat nll_hessian(const ExpHawkesParams& params, const EventSeries& series,
                const TradingCalendar& calendar) {
  check_pair(params, series);
  const std::size_t M = params.dims();
  DaygapTables tables = daygap_tables(params.beta, series, calendar);

  const std::size_t P = M * (1 + M);
  Mat h(P, P, 0.0);
  Vec gvec(1 + M, 0.0);
  for (std::size_t m = 0; m < M; ++m) {
    const Mat& w = tables.W[m];
    const std::size_t base = m * (1 + M);
    for (std::size_t i = 0; i < w.rows; ++i) {
      double lam = params.mu[m];
      for (std::size_t n = 0; n < M; ++n) lam += params.alpha(m, n) * w(i, n);
      if (!(lam > kIntensityFloor))
        throw InfeasibleLikelihood("non-positive intensity at an observed event");
      const double inv2 = 1.0 / (lam * lam);
      gvec[0] = 1.0;
      for (std::size_t n = 0; n < M; ++n) gvec[1 + n] = w(i, n);
      for (std::size_t a = 0; a < 1 + M; ++a)
        for (std::size_t b = a; b < 1 + M; ++b)
          h(base + a, base + b) += gvec[a] * gvec[b] * inv2;
    }
  }
  // Mirror the upper triangles; cross-target blocks stay exactly zero.
  for (std::size_t a = 0; a < P; ++a)
    for (std::size_t b = a + 1; b < P; ++b) h(b, a) = h(a, b);
  return h;
}

double nll_bowsher(const BowsherParams& params, const EventSeries& series,
                   const TradingCalendar& calendar) {
  params.validate();
  series.validate();
  calendar.validate();
  if (series.dims() != 1)
    throw std::invalid_argument("overnight-memory model requires a 1-dimensional series");

  const auto& times = series.times[0];
  const double delta = calendar.day_length();
  const std::size_t D = calendar.day_count();

  // Day index per event; interval_for_event rejects events in gaps.
  std::vector<std::size_t> day(times.size());
  for (std::size_t k = 0; k < times.size(); ++k) day[k] = calendar.interval_for_event(times[k]);

  double total = params.mu * static_cast<double>(D) * delta;
  double lt_close_prev = 0.0;  // excess intensity at the previous day's close
  std::size_t k = 0;
  for (std::size_t d = 0; d < D; ++d) {
    const double open = calendar.intervals[d].open;
    const double x_open = static_cast<double>(d) * delta;
    const double x_close = x_open + delta;
    const double spill = params.pi * lt_close_prev;
    total += spill / params.rho * (-std::expm1(-params.rho * delta));

    double excite = 0.0;  // alpha-weighted same-day kernel sum at the walker position
    double prev_x = x_open;
    while (k < times.size() && day[k] == d) {
      const double x = x_open + (times[k] - open);
      excite *= std::exp(-params.beta * (x - prev_x));
      const double lam = params.mu + spill * std::exp(-params.rho * (x - x_open)) + excite;
      total -= safe_log(lam);
      total += params.alpha / params.beta * (-std::expm1(-params.beta * (x_close - x)));
      excite += params.alpha;
      prev_x = x;
      ++k;
    }
    const double excite_close = excite * std::exp(-params.beta * (x_close - prev_x));
    lt_close_prev = spill * std::exp(-params.rho * delta) + excite_close;
  }
  return finite_or_throw(total);
}

}  // namespace hawkes
