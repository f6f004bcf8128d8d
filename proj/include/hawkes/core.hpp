#pragma once

// Reference-grade process quantities: conditional intensity, compensator,
// branching structure and stability. These favour clarity over speed; the
// likelihood module has the streaming O(N*M^2) implementations.

#include "hawkes/types.hpp"

namespace hawkes {

struct StabilityResult {
  double spectral_radius = 0.0;
  bool stable = false;
  // False when power iteration failed to settle and the radius reported is
  // the max-row-sum upper bound instead.
  bool conclusive = true;
};

// Conditional intensity of dimension i at time t given the history strictly
// before t (an event exactly at t does not contribute). With a calendar the
// intensity is identically zero outside trading hours, and kernels keep
// decaying in raw calendar time across gaps.
double intensity_at(const ExpHawkesParams& params, const EventSeries& series,
                    double t, std::size_t i,
                    const TradingCalendar* calendar = nullptr);

// Integrated intensity of dimension i over [0, t]. With a calendar each
// event's kernel mass accrues only until its own day's close, matching the
// likelihood's integral term, so the compensator is flat across gaps.
double compensator_at(const ExpHawkesParams& params, const EventSeries& series,
                      double t, std::size_t i,
                      const TradingCalendar* calendar = nullptr);

// The branching matrix of the exponential kernel is alpha itself.
Mat branching_matrix(const ExpHawkesParams& params);

// Spectral radius of the branching matrix by power iteration (tolerance
// 1e-10, at most 1000 iterations). Non-convergence falls back to the max
// row sum and is flagged inconclusive. Stable iff radius < 1.
StabilityResult stability_check(const ExpHawkesParams& params);

}  // namespace hawkes
