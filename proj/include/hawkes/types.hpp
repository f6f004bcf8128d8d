#pragma once

// Core value types shared across the library. Validation throws
// std::invalid_argument; numerical failures during likelihood evaluation
// throw InfeasibleLikelihood instead so callers can tell them apart.

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace hawkes {

using Vec = std::vector<double>;

// Dense row-major matrix, just enough for this library.
struct Mat {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> data;

  Mat() = default;
  Mat(std::size_t r, std::size_t c, double fill = 0.0)
      : rows(r), cols(c), data(r * c, fill) {}

  double& operator()(std::size_t i, std::size_t j) { return data[i * cols + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data[i * cols + j]; }

  bool same_shape(const Mat& o) const { return rows == o.rows && cols == o.cols; }
  bool square() const { return rows == cols; }
};

// Thrown when a likelihood evaluation hits a non-finite value or a
// non-positive intensity at an observed event. Distinct from contract
// violations so optimizers can treat it as "infeasible point" if needed.
struct InfeasibleLikelihood : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A multivariate point-process sample path. times[i] holds the event
// timestamps of dimension i, strictly increasing, all within [0, horizon].
// Seconds are the canonical unit throughout the library.
struct EventSeries {
  std::vector<std::vector<double>> times;
  double horizon = 0.0;

  std::size_t dims() const { return times.size(); }
  std::size_t total_events() const {
    std::size_t n = 0;
    for (const auto& t : times) n += t.size();
    return n;
  }
  void validate() const;
};

// Exponential-kernel Hawkes parameters. alpha(i,j) is the expected number
// of dimension-i children spawned by one dimension-j event (the branching
// ratio); beta(i,j) is the corresponding decay rate, so the kernel is
// alpha*beta*exp(-beta*t) and integrates to alpha.
struct ExpHawkesParams {
  Vec mu;
  Mat alpha;
  Mat beta;

  std::size_t dims() const { return mu.size(); }
  void validate() const;
};

// Trading sessions as half-open [open, close) intervals in seconds on a
// common axis. Intervals are disjoint, increasing, and share one length.
struct TradingCalendar {
  struct Interval {
    double open = 0.0;
    double close = 0.0;
  };
  std::vector<Interval> intervals;

  std::size_t day_count() const { return intervals.size(); }
  double day_length() const;
  double total_open_seconds() const { return static_cast<double>(day_count()) * day_length(); }

  // True iff open <= t < close for some interval (the zero-outside-hours rule).
  bool contains(double t) const;

  // Interval owning an event timestamp. Accepts t == close only for the final
  // interval (an event exactly at the last close has zero remaining kernel
  // mass but still counts as observed). Throws std::invalid_argument when t
  // falls in a gap or outside the calendar span.
  std::size_t interval_for_event(double t) const;

  // Accumulated in-session time in [0, t).
  double trading_time_before(double t) const;

  void validate() const;

  static TradingCalendar single(double open, double close);
};

// Single-asset overnight-memory model: within a day the excess intensity is
// pi * (previous day-close excess) * exp(-rho * elapsed-since-open) plus a
// sum of alpha * exp(-beta * lag) terms over same-day events. Note the kernel
// is alpha*exp(-beta*t), unnormalized; its branching ratio is alpha/beta.
// Time is measured on the concatenated trading axis (gaps removed).
struct BowsherParams {
  double mu = 0.0;
  double pi = 0.0;
  double rho = 0.0;
  double alpha = 0.0;
  double beta = 0.0;

  void validate() const;
};

// One probe of the outer decay search: the candidate decay matrix and the
// inner-minimized NLL at it. For the Bowsher fitter the 1x5 matrix holds
// (mu, pi, rho, alpha, beta) and inner_nll the objective at that iterate.
struct TraceEntry {
  Mat beta;
  double inner_nll = 0.0;
};

struct FitResult {
  std::variant<ExpHawkesParams, BowsherParams> params;
  double nll = 0.0;
  std::size_t outer_iterations = 0;
  std::vector<TraceEntry> inner_trace;
  bool converged = false;
};

}  // namespace hawkes
