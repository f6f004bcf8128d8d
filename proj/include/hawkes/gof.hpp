#pragma once

// Goodness of fit by the time-rescaling theorem: mapping each event time
// through its dimension's compensator turns a correctly specified process
// into a unit-rate Poisson process, so rescaled inter-event durations are
// tested against Exp(1).

#include <cstddef>
#include <variant>
#include <vector>

#include "hawkes/types.hpp"

namespace hawkes {

// Rescaled times per dimension: out[i][k] = Lambda_i(t_k^i) under the given
// model (full multivariate history; calendar semantics as in the matching
// NLL). Bowsher parameters require a 1-dimensional series and a calendar.
std::vector<std::vector<double>>
rescale_times(const std::variant<ExpHawkesParams, BowsherParams>& params,
              const EventSeries& series, const TradingCalendar* calendar = nullptr);

struct KsResult {
  double statistic = 0.0;  // sup-norm distance to the Exp(1) CDF
  double p_value = 0.0;    // asymptotic Kolmogorov distribution
  std::size_t n = 0;
};

// One-sample KS test of positive durations against Exp(1). Requires n >= 10.
// p = 2 * sum_{j>=1} (-1)^{j-1} exp(-2 j^2 x^2) at x = sqrt(n) * D, truncated
// at 100 terms or when a term drops below 1e-12, clamped to [0, 1].
KsResult ks_exp1(const std::vector<double>& durations);

struct QqPoint {
  double theoretical = 0.0;  // -log(1 - p) at p = (k - 0.5) / n
  double empirical = 0.0;    // k-th order statistic
};

// Q-Q points of durations against Exp(1) at plotting positions (k-0.5)/n.
std::vector<QqPoint> qq_points(const std::vector<double>& durations);

struct InterarrivalStats {
  std::size_t count = 0;  // number of events (not gaps)
  double mean = 0.0;
  double std_dev = 0.0;   // sample standard deviation (n-1 denominator)
  double median = 0.0;
  double q1 = 0.0;        // quartiles by linear interpolation
  double q3 = 0.0;
};

// Summary of raw inter-event gaps of dimension i, in seconds. Requires at
// least two events in the dimension.
InterarrivalStats interarrival_stats(const EventSeries& series, std::size_t i);

}  // namespace hawkes
