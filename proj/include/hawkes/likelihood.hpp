#pragma once

// Negative log-likelihoods with analytic derivatives. All evaluators stream
// events once using the per-pair decay recursion
//   R[m][n](i) = exp(-beta_mn * (t_i - t_{i-1})) * R[m][n](i-1)
//              + sum over dimension-n events in [t_{i-1}, t_i) of
//                exp(-beta_mn * (t_i - t_k)),
// where t_i runs over dimension-m events, so evaluation is O(N * M^2).
//
// Non-positive intensity at an observed event or a non-finite partial result
// throws InfeasibleLikelihood; NaNs never propagate silently.

#include "hawkes/types.hpp"

namespace hawkes {

// Decay recursion tables. R[m] has one row per dimension-m event and one
// column per source dimension n, holding R[m][n](i) as defined above.
struct RecursionState {
  std::vector<Mat> R;
};

RecursionState compute_recursion(const Mat& beta, const EventSeries& series);

// Everything beta-dependent that repeated (mu, alpha) evaluations need:
// W[m](i, n) = beta(m,n) * R[m][n](i) and the per-pair integrated kernel
// masses K(m, n) = sum over dimension-n events of
// (1 - exp(-beta_mn * (close(day of t_k) - t_k))). Building this once per
// decay probe makes each inner objective evaluation O(N * M).
struct DaygapTables {
  std::vector<Mat> W;
  Mat kernel_integral;
  double open_seconds = 0.0;  // D * delta
};

DaygapTables daygap_tables(const Mat& beta, const EventSeries& series,
                           const TradingCalendar& calendar);

// NLL restricted to target dimension m evaluated from tables:
//   mu_m * D * delta + sum_n alpha_mn * K(m,n) - sum_i log lambda_m(t_i).
// The full NLL is the sum over m.
double nll_block(const DaygapTables& tables, std::size_t m, double mu_m, const Vec& alpha_row);

// NLL over [0, horizon] with no closures:
//   sum_m [ mu_m * T
//           + sum_n alpha_mn * sum_k (1 - exp(-beta_mn * (T - t_k^n)))
//           - sum_i log lambda_m(t_i^m) ].
// Empty series: sum_m mu_m * T.
double nll(const ExpHawkesParams& params, const EventSeries& series);

// Session-gap variant. Intensity is zero outside trading intervals, kernels
// decay in raw calendar time, and each event's integrated kernel mass is
// capped at its own day's close:
//   sum_m [ mu_m * D * delta
//           + sum_n alpha_mn * sum_k (1 - exp(-beta_mn * (close(day of t_k) - t_k^n)))
//           - sum_i log(mu_m + sum_n alpha_mn * beta_mn * R[m][n](i)) ].
// nll() above is exactly this on the single interval [0, horizon].
double nll_daygap(const ExpHawkesParams& params, const EventSeries& series,
                  const TradingCalendar& calendar);

struct NllGradient {
  Vec d_mu;     // dL/d mu_m
  Mat d_alpha;  // dL/d alpha_mn
};

// Analytic gradient of nll_daygap in (mu, alpha) at fixed beta:
//   dL/d mu_m    = D * delta - sum_i 1 / lambda_m(t_i^m)
//   dL/d alpha_mn = sum_k (1 - exp(-beta_mn * (close_k - t_k^n)))
//                 - sum_i beta_mn * R[m][n](i) / lambda_m(t_i^m).
NllGradient nll_gradient(const ExpHawkesParams& params, const EventSeries& series,
                         const TradingCalendar& calendar);

// Hessian of nll_daygap in (mu, alpha) at fixed beta, ordered grouped by
// target dimension: (mu_0, alpha_00..alpha_0M-1, mu_1, alpha_10, ...). It is
// block diagonal with M symmetric PSD blocks of size (1+M):
//   H_m = sum_i g_i g_i^T / lambda_m(t_i)^2,
//   g_i = (1, beta_m0 R[m][0](i), ..., beta_mM-1 R[m][M-1](i)).
// Cross-target entries are exactly zero.
Mat nll_hessian(const ExpHawkesParams& params, const EventSeries& series,
                const TradingCalendar& calendar);

// NLL of the single-asset overnight-memory model on the concatenated trading
// axis x (gaps removed, day d spans [d*delta, (d+1)*delta)):
//   mu * D * delta
//   + sum_d (pi * Ltilde(close_{d-1}) / rho) * (1 - exp(-rho * delta))
//   + (alpha / beta) * sum_d sum_{x_k in d} (1 - exp(-beta * (close_d - x_k)))
//   - sum_i log(mu + Ltilde(x_i)),
// where Ltilde carries the previous close's excess into the next day:
//   Ltilde(close_d) = pi * Ltilde(close_{d-1}) * exp(-rho * delta)
//                   + alpha * sum_{x_k in d} exp(-beta * (close_d - x_k)),
// with Ltilde(close_{-1}) = 0. The series must be 1-dimensional with every
// event inside a trading interval; timestamps are on the raw calendar axis
// and are transformed internally.
double nll_bowsher(const BowsherParams& params, const EventSeries& series,
                   const TradingCalendar& calendar);

}  // namespace hawkes
