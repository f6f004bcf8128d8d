#pragma once

// Two-stage maximum likelihood. The NLL is convex in (mu, alpha) at fixed
// beta, so the inner stage solves that convex problem to tolerance (projected
// Newton using the exact block Hessian, or accelerated projected gradient)
// and the outer stage runs derivative-free Nelder-Mead over log(beta). The
// overnight-memory model has 5 parameters and is fitted directly with a
// projected limited-memory quasi-Newton loop on finite-difference gradients.

#include <cstdint>
#include <optional>

#include "hawkes/types.hpp"

namespace hawkes {

enum class InnerMethod { projected_newton, accelerated_gradient };

struct OptimConfig {
  InnerMethod inner_method = InnerMethod::projected_newton;
  double inner_tol = 1e-8;        // relative objective-change tolerance
  std::size_t inner_max_iter = 500;
  double outer_tol = 1e-4;        // Nelder-Mead simplex size tolerance
  std::size_t outer_max_iter = 0; // 0 means 200 * (number of beta variables)
  double param_floor = 1e-8;      // lower bound for mu, alpha
  // Half-width of the outer search box in log(beta), centred on the
  // initialization. Decays far outside the data's inter-event scale are not
  // identifiable, and on multi-day calendars the unbounded problem is
  // degenerate: a near-flat kernel earns cross-day log-intensity that the
  // day-capped compensator never charges for, so the NLL decreases without
  // bound along beta -> 0 with alpha*beta held fixed.
  double outer_log_width = 6.0;
  std::uint64_t seed = 0;
  // The inner solve warm-starts from the previous outer probe's optimum
  // (safe: the inner problem is convex, so the optimum does not depend on
  // the start). Set true to draw a fresh random start for every probe.
  bool random_inner_init = false;
};

struct InnerResult {
  Vec mu;
  Mat alpha;
  double nll = 0.0;
  std::size_t iterations = 0;
  // Projected-gradient norm at the solution and whether it met the
  // first-order target 1e-5 * (1 + |nll|).
  double pg_norm = 0.0;
  bool kkt_ok = false;
};

// Minimize the day-gap NLL over (mu, alpha) >= param_floor at fixed beta.
// The problem separates across target dimensions; each block is solved
// independently. Starts from a moment-based heuristic, or from a seeded
// random point when random_inner_init is set. Requires at least one event
// in some dimension.
InnerResult inner_minimize(const EventSeries& series, const TradingCalendar& calendar,
                           const Mat& beta, const OptimConfig& config);

// Full two-stage fit: Nelder-Mead over the M^2 log-decay variables, inner
// convex solve at every probe. beta is initialized to 1 / (mean inter-event
// gap of the target dimension) for every entry of row m, and the initial
// simplex perturbs each log coordinate by +0.25. The outer search is
// confined to the box of outer_log_width around that initialization (probes
// outside score +inf); see OptimConfig for why the unbounded problem
// degenerates. Requires >= 5 events per dimension. converged means the
// simplex tolerance was met within the iteration budget; the trace records
// every probed beta with its inner NLL.
FitResult fit_two_stage(const EventSeries& series, const TradingCalendar& calendar,
                        const OptimConfig& config);

// Direct 5-parameter fit of the overnight-memory model: limited-memory
// quasi-Newton over the logs of the parameters with central-difference
// gradients. init defaults to data-driven starting values.
FitResult fit_bowsher(const EventSeries& series, const TradingCalendar& calendar,
                      const OptimConfig& config,
                      const std::optional<BowsherParams>& init = std::nullopt);

}  // namespace hawkes
