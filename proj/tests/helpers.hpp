#pragma once

// Deliberately naive reference implementations used as test oracles. These
// favour direct transcription of the definitions (O(n^2) sums, adaptive
// quadrature) so that a disagreement implicates the library's streaming
// code, not the oracle.

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "hawkes/rng.hpp"
#include "hawkes/types.hpp"

namespace testutil {

using hawkes::BowsherParams;
using hawkes::EventSeries;
using hawkes::ExpHawkesParams;
using hawkes::Mat;
using hawkes::Rng;
using hawkes::TradingCalendar;
using hawkes::Vec;

inline std::vector<std::pair<double, std::size_t>> merged_events(const EventSeries& s) {
  std::vector<std::pair<double, std::size_t>> out;
  for (std::size_t i = 0; i < s.dims(); ++i)
    for (double t : s.times[i]) out.emplace_back(t, i);
  std::sort(out.begin(), out.end());
  return out;
}

// lambda_m(t) by direct summation over every earlier event (strictly before t).
inline double direct_intensity(const ExpHawkesParams& p, const EventSeries& s, double t,
                               std::size_t m) {
  double lam = p.mu[m];
  for (std::size_t n = 0; n < s.dims(); ++n)
    for (double tk : s.times[n]) {
      if (tk >= t) break;
      lam += p.alpha(m, n) * p.beta(m, n) * std::exp(-p.beta(m, n) * (t - tk));
    }
  return lam;
}

// Plain NLL on [0, horizon] by direct sums.
inline double naive_nll(const ExpHawkesParams& p, const EventSeries& s) {
  const double T = s.horizon;
  double total = 0.0;
  for (std::size_t m = 0; m < s.dims(); ++m) {
    double term = p.mu[m] * T;
    for (std::size_t n = 0; n < s.dims(); ++n)
      for (double tk : s.times[n])
        term += p.alpha(m, n) * (1.0 - std::exp(-p.beta(m, n) * (T - tk)));
    for (double te : s.times[m]) term -= std::log(direct_intensity(p, s, te, m));
    total += term;
  }
  return total;
}

// Day-gap NLL by direct sums: baseline over open time only, each source
// event's kernel mass capped at its own day's close, intensities with raw
// calendar-time decay over the full history.
inline double naive_nll_daygap(const ExpHawkesParams& p, const EventSeries& s,
                               const TradingCalendar& cal) {
  double total = 0.0;
  for (std::size_t m = 0; m < s.dims(); ++m) {
    double term = p.mu[m] * cal.total_open_seconds();
    for (std::size_t n = 0; n < s.dims(); ++n)
      for (double tk : s.times[n]) {
        const double close = cal.intervals[cal.interval_for_event(tk)].close;
        term += p.alpha(m, n) * (1.0 - std::exp(-p.beta(m, n) * (close - tk)));
      }
    for (double te : s.times[m]) term -= std::log(direct_intensity(p, s, te, m));
    total += term;
  }
  return total;
}

inline double adaptive_simpson_rec(const std::function<double(double)>& f, double a,
                                   double b, double fa, double fm, double fb, double whole,
                                   double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  if (depth <= 0 || std::abs(left + right - whole) < 15.0 * tol)
    return left + right + (left + right - whole) / 15.0;
  return adaptive_simpson_rec(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1) +
         adaptive_simpson_rec(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1);
}

inline double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                               double tol = 1e-12, int depth = 48) {
  if (b <= a) return 0.0;
  const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return adaptive_simpson_rec(f, a, b, fa, fm, fb, whole, tol, depth);
}

// Integral of lambda_m over the calendar's sessions by adaptive quadrature.
// Each session is split at event times so every piece is smooth; within a
// piece the excitation is frozen at the piece start and decayed in closed
// form, which is exactly the left-continuous intensity for x > start.
inline double quad_session_integral(const ExpHawkesParams& p, const EventSeries& s,
                                    const TradingCalendar& cal, std::size_t m,
                                    double tol = 1e-12) {
  const auto all = merged_events(s);
  double total = 0.0;
  for (const auto& iv : cal.intervals) {
    std::vector<double> cuts{iv.open};
    for (const auto& [t, dim] : all) {
      (void)dim;
      if (t > iv.open && t < iv.close) cuts.push_back(t);
    }
    cuts.push_back(iv.close);
    for (std::size_t c = 0; c + 1 < cuts.size(); ++c) {
      const double a = cuts[c], b = cuts[c + 1];
      Vec excite(s.dims(), 0.0);
      for (std::size_t n = 0; n < s.dims(); ++n)
        for (double tk : s.times[n]) {
          if (tk > a) break;
          excite[n] += p.alpha(m, n) * p.beta(m, n) * std::exp(-p.beta(m, n) * (a - tk));
        }
      auto f = [&](double x) {
        double lam = p.mu[m];
        for (std::size_t n = 0; n < s.dims(); ++n)
          lam += excite[n] * std::exp(-p.beta(m, n) * (x - a));
        return lam;
      };
      total += adaptive_simpson(f, a, b, tol);
    }
  }
  return total;
}

// Direct transcription of the overnight-memory model on the concatenated
// trading axis: spill recursion, piecewise-smooth intensity, quadrature NLL.
struct BowsherOracle {
  BowsherParams p;
  double delta = 0.0;
  std::vector<std::vector<double>> day_x;  // per-day event times, concatenated axis
  std::vector<double> spill;               // pi * Ltilde(prev close), per day

  static BowsherOracle build(const BowsherParams& params, const EventSeries& s,
                             const TradingCalendar& cal) {
    if (s.dims() != 1) throw std::invalid_argument("oracle is univariate");
    BowsherOracle o;
    o.p = params;
    o.delta = cal.day_length();
    o.day_x.resize(cal.day_count());
    for (double t : s.times[0]) {
      const std::size_t d = cal.interval_for_event(t);
      o.day_x[d].push_back(static_cast<double>(d) * o.delta + (t - cal.intervals[d].open));
    }
    double lt = 0.0;
    o.spill.resize(cal.day_count());
    for (std::size_t d = 0; d < cal.day_count(); ++d) {
      o.spill[d] = params.pi * lt;
      const double close = static_cast<double>(d + 1) * o.delta;
      double excite = 0.0;
      for (double x : o.day_x[d]) excite += params.alpha * std::exp(-params.beta * (close - x));
      lt = o.spill[d] * std::exp(-params.rho * o.delta) + excite;
    }
    return o;
  }

  // Intensity at x (concatenated axis), history strictly before x.
  double intensity(double x) const {
    std::size_t d = static_cast<std::size_t>(x / delta);
    if (d >= day_x.size()) d = day_x.size() - 1;
    double lam = p.mu + spill[d] * std::exp(-p.rho * (x - static_cast<double>(d) * delta));
    for (double xk : day_x[d]) {
      if (xk >= x) break;
      lam += p.alpha * std::exp(-p.beta * (x - xk));
    }
    return lam;
  }

  double nll_quadrature(double tol = 1e-12) const {
    double total = 0.0;
    for (std::size_t d = 0; d < day_x.size(); ++d) {
      const double open = static_cast<double>(d) * delta;
      const double close = open + delta;
      std::vector<double> cuts{open};
      for (double x : day_x[d])
        if (x > open && x < close) cuts.push_back(x);
      cuts.push_back(close);
      for (std::size_t c = 0; c + 1 < cuts.size(); ++c) {
        const double a = cuts[c], b = cuts[c + 1];
        double excite = 0.0;
        for (double xk : day_x[d]) {
          if (xk > a) break;
          excite += p.alpha * std::exp(-p.beta * (a - xk));
        }
        const double sp = spill[d];
        auto f = [&, excite, sp, a, open](double x) {
          return p.mu + sp * std::exp(-p.rho * (x - open)) +
                 excite * std::exp(-p.beta * (x - a));
        };
        total += adaptive_simpson(f, a, b, tol);
      }
      for (double x : day_x[d]) total -= std::log(intensity(x));
    }
    return total;
  }
};

// Eigenvalues of a symmetric matrix by cyclic Jacobi rotations.
inline std::vector<double> jacobi_eigenvalues(Mat a) {
  if (!a.square()) throw std::invalid_argument("jacobi needs a square matrix");
  const std::size_t n = a.rows;
  for (int sweep = 0; sweep < 200; ++sweep) {
    double off = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) off += a(i, j) * a(i, j);
    if (off < 1e-28) break;
    for (std::size_t pi = 0; pi < n; ++pi)
      for (std::size_t q = pi + 1; q < n; ++q) {
        if (std::abs(a(pi, q)) < 1e-300) continue;
        const double theta = 0.5 * std::atan2(2.0 * a(pi, q), a(q, q) - a(pi, pi));
        const double c = std::cos(theta), s2 = std::sin(theta);
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a(k, pi), akq = a(k, q);
          a(k, pi) = c * akp - s2 * akq;
          a(k, q) = s2 * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = a(pi, k), aqk = a(q, k);
          a(pi, k) = c * apk - s2 * aqk;
          a(q, k) = s2 * apk + c * aqk;
        }
      }
  }
  std::vector<double> ev(n);
  for (std::size_t i = 0; i < n; ++i) ev[i] = a(i, i);
  std::sort(ev.begin(), ev.end());
  return ev;
}

// Random strictly increasing times for each dimension on [0, horizon).
inline EventSeries random_series(Rng& rng, std::size_t dims, std::size_t max_per_dim,
                                 double horizon) {
  EventSeries s;
  s.horizon = horizon;
  s.times.resize(dims);
  for (std::size_t i = 0; i < dims; ++i) {
    const std::size_t n = 1 + static_cast<std::size_t>(rng.uniform() * max_per_dim);
    std::vector<double> t(n);
    for (auto& v : t) v = rng.uniform() * horizon;
    std::sort(t.begin(), t.end());
    t.erase(std::unique(t.begin(), t.end()), t.end());
    s.times[i] = std::move(t);
  }
  return s;
}

inline ExpHawkesParams random_stable_params(Rng& rng, std::size_t dims) {
  ExpHawkesParams p;
  p.mu.resize(dims);
  p.alpha = Mat(dims, dims);
  p.beta = Mat(dims, dims);
  for (auto& v : p.mu) v = 0.01 + 0.5 * rng.uniform();
  for (std::size_t i = 0; i < dims; ++i)
    for (std::size_t j = 0; j < dims; ++j) {
      // Row sums < 0.9 keep the branching matrix comfortably subcritical.
      p.alpha(i, j) = 0.9 * rng.uniform() / static_cast<double>(dims);
      p.beta(i, j) = 0.05 + 2.0 * rng.uniform();
    }
  return p;
}

struct TmpDir {
  std::string path;
  TmpDir() {
    char tmpl[] = "/tmp/hawkes_test_XXXXXX";
    char* p = ::mkdtemp(tmpl);
    if (!p) throw std::runtime_error("mkdtemp failed");
    path = p;
  }
  ~TmpDir() {
    std::error_code ec;
    std::filesystem::remove_all(path, ec);
  }
  std::string file(const std::string& name) const { return path + "/" + name; }
};

}  // namespace testutil
