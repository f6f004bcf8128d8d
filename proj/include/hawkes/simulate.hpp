#pragma once

// Exact simulation by Ogata thinning. The dominating rate is the total
// intensity immediately after the most recent event (intensity only decays
// between events, so this dominates until the next one). Candidates that
// cross a session close are discarded and the clock advances to the next
// open, where the bound is re-evaluated; this also covers upward intensity
// jumps at day opens in the overnight-memory model.

#include <cstdint>
#include <optional>

#include "hawkes/rng.hpp"
#include "hawkes/types.hpp"

namespace hawkes {

struct SimConfig {
  std::uint64_t seed = 0;
  // Exactly one of horizon / max_events must be set. With max_events the
  // returned series' horizon is the last accepted event time.
  std::optional<double> horizon;
  std::optional<std::size_t> max_events;
  // Optional session calendar; simulate_hawkes with a calendar behaves
  // exactly like simulate_daygap.
  std::optional<TradingCalendar> calendar;
};

// Multivariate exponential-kernel Hawkes on [0, horizon] (or until
// max_events). Throws std::invalid_argument when the branching matrix has
// spectral radius >= 1.05 (message names the radius) or when all baselines
// are zero; warns on stderr for radius in [1, 1.05).
EventSeries simulate_hawkes(const ExpHawkesParams& params, const SimConfig& config);

// Same process restricted to trading sessions: the intensity is switched off
// in gaps while kernels keep decaying in raw calendar time. With a single
// interval [0, horizon] this reproduces simulate_hawkes draw for draw.
EventSeries simulate_daygap(const ExpHawkesParams& params,
                            const TradingCalendar& calendar, const SimConfig& config);

// Single-asset overnight-memory model (see nll_bowsher for the intensity).
// Runs on the concatenated trading axis and maps events back to calendar
// time. Requires alpha < 1 per the model's stated condition; additionally
// warns on stderr when alpha/beta >= 1 since the within-day cascade is then
// supercritical.
EventSeries simulate_bowsher(const BowsherParams& params,
                             const TradingCalendar& calendar, const SimConfig& config);

}  // namespace hawkes
