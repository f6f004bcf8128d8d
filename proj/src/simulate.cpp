#include "hawkes/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <limits>
#include <string>

#include "hawkes/core.hpp"

namespace hawkes {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
// Hard cap so runaway (near-critical) cascades fail loudly instead of
// exhausting memory.
constexpr std::size_t kEventBudget = 50'000'000;

void check_mode(const SimConfig& config) {
  if (config.horizon.has_value() == config.max_events.has_value())
    throw std::invalid_argument("SimConfig: exactly one of horizon / max_events must be set");
  if (config.horizon && !(std::isfinite(*config.horizon) && *config.horizon > 0.0))
    throw std::invalid_argument("SimConfig: horizon must be positive and finite");
  if (config.max_events && *config.max_events == 0)
    throw std::invalid_argument("SimConfig: max_events must be positive");
}

// Sessions to simulate over, clipped to the horizon when one is set.
std::vector<TradingCalendar::Interval> clip_intervals(const TradingCalendar& calendar,
                                                      const SimConfig& config) {
  std::vector<TradingCalendar::Interval> out;
  for (const auto& iv : calendar.intervals) {
    TradingCalendar::Interval c = iv;
    if (config.horizon) {
      if (c.open >= *config.horizon) break;
      c.close = std::min(c.close, *config.horizon);
    }
    if (c.close > c.open) out.push_back(c);
  }
  if (out.empty()) throw std::invalid_argument("simulate: no trading time before the horizon");
  return out;
}

// Shared Ogata thinning loop for the exponential-kernel process over a list
// of sessions. The dominating rate is the total intensity immediately after
// the most recent event; intensity only decays until the next event, so the
// bound stays valid and is refreshed at every rejection and session open.
EventSeries thin_exp_kernel(const ExpHawkesParams& params,
                            const std::vector<TradingCalendar::Interval>& sessions,
                            const SimConfig& config) {
  const std::size_t M = params.dims();
  Rng rng(config.seed);

  EventSeries out;
  out.times.resize(M);

  // excite[i*M+j]: alpha_ij * beta_ij * sum of decayed kernels from past
  // dimension-j events, i.e. the excitation part of lambda_i.
  std::vector<double> excite(M * M, 0.0);
  Vec lam(M, 0.0);
  auto refresh = [&](double) {
    for (std::size_t i = 0; i < M; ++i) {
      double s = params.mu[i];
      for (std::size_t j = 0; j < M; ++j) s += excite[i * M + j];
      lam[i] = s;
    }
  };
  auto decay = [&](double dt) {
    if (dt <= 0.0) return;
    for (std::size_t i = 0; i < M; ++i)
      for (std::size_t j = 0; j < M; ++j) excite[i * M + j] *= std::exp(-params.beta(i, j) * dt);
  };

  std::size_t accepted = 0;
  double s = sessions.front().open;
  double last_event = s;
  for (const auto& session : sessions) {
    if (s < session.open) {
      decay(session.open - s);
      s = session.open;
    }
    for (;;) {
      refresh(s);
      double bound = 0.0;
      for (double v : lam) bound += v;
      if (!(bound > 0.0)) break;  // dead process in this session

      const double w = rng.exponential(bound);
      const double cand = s + w;
      if (cand >= session.close) {
        if (std::isfinite(session.close)) {
          decay(session.close - s);
          s = session.close;
        }
        break;
      }
      decay(w);
      s = cand;
      refresh(s);
      double total = 0.0;
      for (double v : lam) total += v;
      const double ratio = total / bound;
      if (ratio > 1.0 + 1e-9)
        throw std::logic_error("thinning bound violated: acceptance ratio " +
                               std::to_string(ratio));
      if (rng.uniform() < ratio) {
        std::size_t dim = 0;
        if (M > 1) {
          // Assign the event proportionally to per-dimension intensities.
          const double v = rng.uniform() * total;
          double cum = 0.0;
          dim = M - 1;
          for (std::size_t i = 0; i < M; ++i) {
            cum += lam[i];
            if (v < cum) {
              dim = i;
              break;
            }
          }
        }
        if (!out.times[dim].empty() && out.times[dim].back() == s) {
          // Duplicate timestamp (possible only through floating rounding);
          // drop it defensively.
          continue;
        }
        out.times[dim].push_back(s);
        last_event = s;
        ++accepted;
        if (accepted > kEventBudget)
          throw std::runtime_error("simulate: event budget exceeded, parameters near-critical");
        for (std::size_t i = 0; i < M; ++i)
          excite[i * M + dim] += params.alpha(i, dim) * params.beta(i, dim);
        if (config.max_events && accepted == *config.max_events) {
          out.horizon = last_event;
          out.validate();
          return out;
        }
      }
    }
  }
  if (config.horizon) {
    out.horizon = *config.horizon;
  } else {
    // max_events not reached before the sessions ran out.
    out.horizon = std::isfinite(sessions.back().close) ? sessions.back().close : last_event;
    if (!(out.horizon > 0.0)) out.horizon = 1.0;
  }
  out.validate();
  return out;
}

void check_stability(const ExpHawkesParams& params) {
  const StabilityResult st = stability_check(params);
  if (st.spectral_radius >= 1.05)
    throw std::invalid_argument("unstable parameters: branching spectral radius " +
                                std::to_string(st.spectral_radius) + " >= 1.05");
  if (st.spectral_radius >= 1.0)
    std::cerr << "warning: near-critical branching, spectral radius "
              << st.spectral_radius << "\n";
}

}  // namespace

EventSeries simulate_hawkes(const ExpHawkesParams& params, const SimConfig& config) {
  params.validate();
  check_mode(config);
  if (config.calendar) return simulate_daygap(params, *config.calendar, config);
  check_stability(params);
  bool any_mu = false;
  for (double m : params.mu) any_mu |= m > 0.0;
  if (!any_mu)
    throw std::invalid_argument("all baselines are zero: total intensity starts at zero");

  std::vector<TradingCalendar::Interval> sessions;
  sessions.push_back({0.0, config.horizon ? *config.horizon : kInf});
  return thin_exp_kernel(params, sessions, config);
}

EventSeries simulate_daygap(const ExpHawkesParams& params, const TradingCalendar& calendar,
                            const SimConfig& config) {
  params.validate();
  calendar.validate();
  check_mode(config);
  check_stability(params);
  bool any_mu = false;
  for (double m : params.mu) any_mu |= m > 0.0;
  if (!any_mu)
    throw std::invalid_argument("all baselines are zero: total intensity starts at zero");

  auto sessions = clip_intervals(calendar, config);
  return thin_exp_kernel(params, sessions, config);
}

EventSeries simulate_bowsher(const BowsherParams& params, const TradingCalendar& calendar,
                             const SimConfig& config) {
  params.validate();
  calendar.validate();
  check_mode(config);
  if (params.alpha >= 1.0)
    throw std::invalid_argument("overnight-memory model requires alpha < 1");
  if (params.alpha / params.beta >= 1.0)
    std::cerr << "warning: within-day branching alpha/beta = "
              << params.alpha / params.beta << " >= 1, cascades are supercritical\n";
  if (!(params.mu > 0.0))
    throw std::invalid_argument("all baselines are zero: total intensity starts at zero");

  auto sessions = clip_intervals(calendar, config);
  const double delta = calendar.day_length();
  Rng rng(config.seed);

  EventSeries out;
  out.times.resize(1);
  double lt_close_prev = 0.0;
  std::size_t accepted = 0;
  double last_event = sessions.front().open;
  bool done = false;
  for (std::size_t d = 0; d < sessions.size() && !done; ++d) {
    const auto& session = sessions[d];
    const double spill0 = params.pi * lt_close_prev;
    double spill = spill0;   // spill decayed to the walker position
    double excite = 0.0;     // same-day kernel sum at the walker position
    double x = session.open; // walker on the raw axis; in-session only
    for (;;) {
      const double bound = params.mu + spill + excite;
      if (!(bound > 0.0)) break;
      const double w = rng.exponential(bound);
      const double cand = x + w;
      if (cand >= session.close) break;
      spill *= std::exp(-params.rho * w);
      excite *= std::exp(-params.beta * w);
      x = cand;
      const double total = params.mu + spill + excite;
      const double ratio = total / bound;
      if (ratio > 1.0 + 1e-9)
        throw std::logic_error("thinning bound violated: acceptance ratio " +
                               std::to_string(ratio));
      if (rng.uniform() < ratio) {
        if (!out.times[0].empty() && out.times[0].back() == x) continue;
        out.times[0].push_back(x);
        last_event = x;
        ++accepted;
        if (accepted > kEventBudget)
          throw std::runtime_error("simulate: event budget exceeded, parameters near-critical");
        excite += params.alpha;
        if (config.max_events && accepted == *config.max_events) {
          done = true;
          break;
        }
      }
    }
    if (!done) {
      // Carry the excess intensity across the gap: the spill part has the
      // closed form over the full day, the same-day sum decays from the
      // walker's last position to the true (unclipped) session close.
      const double full_close = calendar.intervals[d].close;
      lt_close_prev = spill0 * std::exp(-params.rho * delta) +
                      excite * std::exp(-params.beta * std::max(0.0, full_close - x));
    }
  }
  if (config.max_events && done) {
    out.horizon = last_event;
  } else if (config.horizon) {
    out.horizon = *config.horizon;
  } else {
    out.horizon = calendar.intervals.back().close;
  }
  out.validate();
  return out;
}

}  // namespace hawkes
