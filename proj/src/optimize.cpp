#include "hawkes/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <string>
#include <vector>

#include "hawkes/likelihood.hpp"
#include "hawkes/rng.hpp"

namespace hawkes {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void clamp_floor(Vec& x, double lo) {
  for (double& v : x) v = std::max(v, lo);
}

// Gradient norm with coordinates pinned at the lower bound zeroed when the
// gradient pushes further down is the first-order measure for a box problem.
double projected_grad_norm(const Vec& x, const Vec& g, double lo) {
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    double gi = g[i];
    if (x[i] <= lo && gi > 0.0) gi = 0.0;
    s += gi * gi;
  }
  return std::sqrt(s);
}

// In-place lower Cholesky; false when not positive definite.
bool cholesky(Mat& a) {
  const std::size_t n = a.rows;
  for (std::size_t j = 0; j < n; ++j) {
    double d = a(j, j);
    for (std::size_t k = 0; k < j; ++k) d -= a(j, k) * a(j, k);
    if (!(d > 0.0) || !std::isfinite(d)) return false;
    const double l = std::sqrt(d);
    a(j, j) = l;
    for (std::size_t i = j + 1; i < n; ++i) {
      double v = a(i, j);
      for (std::size_t k = 0; k < j; ++k) v -= a(i, k) * a(j, k);
      a(i, j) = v / l;
    }
  }
  return true;
}

void cholesky_solve(const Mat& l, const Vec& b, Vec& x) {
  const std::size_t n = l.rows;
  x = b;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < i; ++k) x[i] -= l(i, k) * x[k];
    x[i] /= l(i, i);
  }
  for (std::size_t i = n; i-- > 0;) {
    for (std::size_t k = i + 1; k < n; ++k) x[i] -= l(k, i) * x[k];
    x[i] /= l(i, i);
  }
}

// Block objective helpers. x = (mu_m, alpha_m0, ..., alpha_mM-1).
double block_f(const DaygapTables& T, std::size_t m, const Vec& x) {
  Vec row(x.begin() + 1, x.end());
  return nll_block(T, m, x[0], row);
}

void block_fg(const DaygapTables& T, std::size_t m, const Vec& x, double& f, Vec& g) {
  const Mat& w = T.W[m];
  const std::size_t M = w.cols;
  f = x[0] * T.open_seconds;
  g.assign(1 + M, 0.0);
  g[0] = T.open_seconds;
  for (std::size_t n = 0; n < M; ++n) {
    f += x[1 + n] * T.kernel_integral(m, n);
    g[1 + n] = T.kernel_integral(m, n);
  }
  for (std::size_t i = 0; i < w.rows; ++i) {
    double lam = x[0];
    for (std::size_t n = 0; n < M; ++n) lam += x[1 + n] * w(i, n);
    f -= std::log(lam);
    const double inv = 1.0 / lam;
    g[0] -= inv;
    for (std::size_t n = 0; n < M; ++n) g[1 + n] -= w(i, n) * inv;
  }
}

void block_fgh(const DaygapTables& T, std::size_t m, const Vec& x, double& f, Vec& g,
               Mat& h) {
  const Mat& w = T.W[m];
  const std::size_t M = w.cols;
  block_fg(T, m, x, f, g);
  h = Mat(1 + M, 1 + M, 0.0);
  for (std::size_t i = 0; i < w.rows; ++i) {
    double lam = x[0];
    for (std::size_t n = 0; n < M; ++n) lam += x[1 + n] * w(i, n);
    const double inv2 = 1.0 / (lam * lam);
    h(0, 0) += inv2;
    for (std::size_t a = 0; a < M; ++a) {
      const double wa = w(i, a) * inv2;
      h(0, 1 + a) += wa;
      for (std::size_t b = a; b < M; ++b) h(1 + a, 1 + b) += wa * w(i, b);
    }
  }
  for (std::size_t a = 0; a < 1 + M; ++a)
    for (std::size_t b = a + 1; b < 1 + M; ++b) h(b, a) = h(a, b);
}

struct BlockSolve {
  Vec x;
  double f = 0.0;
  std::size_t iters = 0;
  double pg = 0.0;
};

BlockSolve newton_block(const DaygapTables& T, std::size_t m, Vec x,
                        const OptimConfig& cfg) {
  const double lo = cfg.param_floor;
  clamp_floor(x, lo);
  const std::size_t n = x.size();
  double f;
  Vec g(n);
  Mat h(n, n);
  block_fgh(T, m, x, f, g, h);

  std::size_t it = 0;
  int stall = 0;
  for (; it < cfg.inner_max_iter; ++it) {
    if (projected_grad_norm(x, g, lo) <= 1e-9 * (1.0 + std::abs(f))) break;

    // Coordinates pinned at the floor with an outward-pushing gradient must
    // be excluded from the Newton system: solving on the full Hessian mixes
    // them into the free components and can turn the step into an ascent
    // direction that no backtracking can rescue.
    std::vector<std::size_t> free_ix;
    free_ix.reserve(n);
    for (std::size_t i = 0; i < n; ++i)
      if (!(x[i] <= lo && g[i] > 0.0)) free_ix.push_back(i);

    Vec p(g);  // pinned coordinates take the gradient; projection holds them
    if (!free_ix.empty()) {
      const std::size_t k = free_ix.size();
      Vec gf(k), pf(k);
      for (std::size_t i = 0; i < k; ++i) gf[i] = g[free_ix[i]];
      bool solved = false;
      double damp = 0.0;
      for (int tries = 0; tries <= 12 && !solved; ++tries) {
        Mat a(k, k);
        for (std::size_t i = 0; i < k; ++i)
          for (std::size_t j = 0; j < k; ++j) a(i, j) = h(free_ix[i], free_ix[j]);
        if (tries > 0) {
          damp = (damp == 0.0) ? 1e-10 : damp * 100.0;
          for (std::size_t i = 0; i < k; ++i) a(i, i) += damp * (1.0 + a(i, i));
        }
        if (cholesky(a)) {
          cholesky_solve(a, gf, pf);
          solved = true;
        }
      }
      if (!solved) pf = gf;
      for (std::size_t i = 0; i < k; ++i) p[free_ix[i]] = pf[i];
    }

    double step = 1.0;
    Vec xn(n);
    double fn = 0.0;
    bool improved = false;
    for (int bt = 0; bt < 60; ++bt) {
      bool moved = false;
      for (std::size_t i = 0; i < n; ++i) {
        xn[i] = std::max(lo, x[i] - step * p[i]);
        moved |= xn[i] != x[i];
      }
      if (!moved) break;
      fn = block_f(T, m, xn);
      if (fn <= f) {  // accepted steps never increase the objective
        improved = true;
        break;
      }
      step *= 0.5;
    }
    if (!improved) break;
    const double drop = f - fn;
    x = xn;
    block_fgh(T, m, x, f, g, h);
    // Two consecutive zero-progress accepts mean the search is at the
    // numeric floor of the objective; the gradient test above handles
    // ordinary convergence.
    if (drop == 0.0) {
      if (++stall >= 2) {
        ++it;
        break;
      }
    } else {
      stall = 0;
    }
  }
  return {x, f, it, projected_grad_norm(x, g, lo)};
}

BlockSolve agd_block(const DaygapTables& T, std::size_t m, Vec x, const OptimConfig& cfg) {
  const double lo = cfg.param_floor;
  clamp_floor(x, lo);
  const std::size_t n = x.size();

  double L;
  double f;
  Vec g(n);
  {
    Mat h(n, n);
    block_fgh(T, m, x, f, g, h);
    double bound = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double s = 0.0;
      for (std::size_t j = 0; j < n; ++j) s += std::abs(h(i, j));
      bound = std::max(bound, s);
    }
    L = std::max(bound, 1e-12);
  }

  double pg = projected_grad_norm(x, g, lo);
  Vec y = x;
  Vec gy(n), xn(n);
  double t = 1.0;
  bool momentum_off = false;
  std::size_t it = 0;
  for (; it < cfg.inner_max_iter; ++it) {
    if (pg <= 1e-8 * (1.0 + std::abs(f))) break;
    double fy;
    block_fg(T, m, y, fy, gy);
    double fxn;
    for (;;) {
      for (std::size_t i = 0; i < n; ++i) xn[i] = std::max(lo, y[i] - gy[i] / L);
      double lin = 0.0, quad = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        const double d = xn[i] - y[i];
        lin += gy[i] * d;
        quad += d * d;
      }
      fxn = block_f(T, m, xn);
      if (fxn <= fy + lin + 0.5 * L * quad + 1e-10 * std::max(1.0, std::abs(fy))) break;
      L *= 2.0;
      if (L > 1e290) break;
    }
    if (fxn > f) {
      // A proximal step taken directly from the incumbent cannot improve it,
      // so the objective is at its numeric floor; otherwise drop the momentum
      // and retry from the incumbent.
      if (momentum_off) break;
      y = x;
      t = 1.0;
      momentum_off = true;
      continue;
    }
    momentum_off = false;
    const double tn = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
    for (std::size_t i = 0; i < n; ++i)
      y[i] = std::max(lo, xn[i] + (t - 1.0) / tn * (xn[i] - x[i]));
    x = xn;
    t = tn;
    block_fg(T, m, x, f, g);
    pg = projected_grad_norm(x, g, lo);
  }
  return {x, f, it, pg};
}

// Heuristic starting block: mu at the dimension's raw event rate, alpha 0.2.
Vec heuristic_start(const DaygapTables& T, const EventSeries& series, std::size_t m,
                    double lo) {
  const std::size_t M = series.dims();
  Vec x(1 + M, 0.2);
  const double rate = static_cast<double>(series.times[m].size()) / T.open_seconds;
  x[0] = std::max(rate, lo);
  clamp_floor(x, lo);
  return x;
}

// Randomized starting block scattered around the heuristic's scale.
Vec random_start(const DaygapTables& T, const EventSeries& series, std::size_t m,
                 Rng& rng, double lo) {
  const std::size_t M = series.dims();
  Vec x(1 + M, 0.0);
  const double rate = static_cast<double>(series.times[m].size()) / T.open_seconds;
  x[0] = rate * (0.5 + rng.uniform());
  for (std::size_t n = 0; n < M; ++n) x[1 + n] = 0.2 * (0.5 + rng.uniform());
  clamp_floor(x, lo);
  return x;
}

std::vector<BlockSolve> solve_blocks(const DaygapTables& T,
                                     const std::vector<Vec>& starts,
                                     const OptimConfig& cfg) {
  std::vector<BlockSolve> out;
  out.reserve(starts.size());
  for (std::size_t m = 0; m < starts.size(); ++m) {
    out.push_back(cfg.inner_method == InnerMethod::projected_newton
                      ? newton_block(T, m, starts[m], cfg)
                      : agd_block(T, m, starts[m], cfg));
  }
  return out;
}

struct NmOut {
  Vec best;
  double fbest = 0.0;
  std::size_t iterations = 0;
  bool converged = false;
};

// Standard Nelder-Mead (reflect 1, expand 2, contract 0.5, shrink 0.5);
// stops when every vertex is within tol of the best in the max norm.
NmOut nelder_mead(const std::function<double(const Vec&)>& fn, const Vec& x0, double step,
                  double tol, std::size_t max_iter) {
  const std::size_t n = x0.size();
  std::vector<Vec> xs(n + 1, x0);
  for (std::size_t i = 0; i < n; ++i) xs[i + 1][i] += step;
  Vec fs(n + 1);
  for (std::size_t v = 0; v <= n; ++v) fs[v] = fn(xs[v]);

  std::vector<std::size_t> idx(n + 1);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  NmOut out;
  auto replace_worst = [&](std::size_t worst, Vec&& xv, double fv) {
    xs[worst] = std::move(xv);
    fs[worst] = fv;
  };
  std::size_t it = 0;
  for (; it < max_iter; ++it) {
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return fs[a] < fs[b]; });
    const std::size_t best = idx[0], second = idx[n - 1], worst = idx[n];
    double size = 0.0;
    for (std::size_t v = 0; v <= n; ++v)
      for (std::size_t i = 0; i < n; ++i)
        size = std::max(size, std::abs(xs[v][i] - xs[best][i]));
    if (size <= tol) {
      out.converged = true;
      break;
    }

    Vec c(n, 0.0);
    for (std::size_t v = 0; v <= n; ++v) {
      if (v == worst) continue;
      for (std::size_t i = 0; i < n; ++i) c[i] += xs[v][i];
    }
    for (double& v : c) v /= static_cast<double>(n);

    Vec xr(n);
    for (std::size_t i = 0; i < n; ++i) xr[i] = c[i] + (c[i] - xs[worst][i]);
    const double fr = fn(xr);
    if (fr < fs[best]) {
      Vec xe(n);
      for (std::size_t i = 0; i < n; ++i) xe[i] = c[i] + 2.0 * (c[i] - xs[worst][i]);
      const double fe = fn(xe);
      if (fe < fr)
        replace_worst(worst, std::move(xe), fe);
      else
        replace_worst(worst, std::move(xr), fr);
    } else if (fr < fs[second]) {
      replace_worst(worst, std::move(xr), fr);
    } else {
      bool shrink = false;
      if (fr < fs[worst]) {
        Vec xc(n);
        for (std::size_t i = 0; i < n; ++i) xc[i] = c[i] + 0.5 * (xr[i] - c[i]);
        const double fc = fn(xc);
        if (fc <= fr)
          replace_worst(worst, std::move(xc), fc);
        else
          shrink = true;
      } else {
        Vec xc(n);
        for (std::size_t i = 0; i < n; ++i) xc[i] = c[i] - 0.5 * (c[i] - xs[worst][i]);
        const double fc = fn(xc);
        if (fc < fs[worst])
          replace_worst(worst, std::move(xc), fc);
        else
          shrink = true;
      }
      if (shrink) {
        for (std::size_t v = 0; v <= n; ++v) {
          if (v == idx[0]) continue;
          for (std::size_t i = 0; i < n; ++i)
            xs[v][i] = xs[idx[0]][i] + 0.5 * (xs[v][i] - xs[idx[0]][i]);
          fs[v] = fn(xs[v]);
        }
      }
    }
  }
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return fs[a] < fs[b]; });
  out.best = xs[idx[0]];
  out.fbest = fs[idx[0]];
  out.iterations = it;
  return out;
}

}  // namespace

InnerResult inner_minimize(const EventSeries& series, const TradingCalendar& calendar,
                           const Mat& beta, const OptimConfig& config) {
  series.validate();
  calendar.validate();
  const std::size_t M = series.dims();
  if (beta.rows != M || beta.cols != M)
    throw std::invalid_argument("inner_minimize: beta shape mismatch");
  for (double b : beta.data)
    if (!(b > 0.0) || !std::isfinite(b))
      throw std::invalid_argument("inner_minimize: beta entries must be positive");
  if (series.total_events() == 0)
    throw std::invalid_argument("inner_minimize: series has no events");

  const DaygapTables T = daygap_tables(beta, series, calendar);
  Rng rng(config.seed);
  std::vector<Vec> starts;
  starts.reserve(M);
  for (std::size_t m = 0; m < M; ++m)
    starts.push_back(config.random_inner_init
                         ? random_start(T, series, m, rng, config.param_floor)
                         : heuristic_start(T, series, m, config.param_floor));
  const auto blocks = solve_blocks(T, starts, config);

  InnerResult r;
  r.mu.resize(M);
  r.alpha = Mat(M, M);
  double pg2 = 0.0;
  for (std::size_t m = 0; m < M; ++m) {
    r.mu[m] = blocks[m].x[0];
    for (std::size_t n = 0; n < M; ++n) r.alpha(m, n) = blocks[m].x[1 + n];
    r.nll += blocks[m].f;
    r.iterations = std::max(r.iterations, blocks[m].iters);
    pg2 += blocks[m].pg * blocks[m].pg;
  }
  r.pg_norm = std::sqrt(pg2);
  r.kkt_ok = r.pg_norm < 1e-5 * (1.0 + std::abs(r.nll));
  return r;
}

FitResult fit_two_stage(const EventSeries& series, const TradingCalendar& calendar,
                        const OptimConfig& config) {
  series.validate();
  calendar.validate();
  const std::size_t M = series.dims();
  for (std::size_t m = 0; m < M; ++m)
    if (series.times[m].size() < 5)
      throw std::invalid_argument("fit requires at least 5 events in every dimension");

  const std::size_t nb = M * M;
  // Mean inter-arrival in trading time (overnight spans carry no events and
  // would only inflate the gap).
  const double open_total = calendar.total_open_seconds();
  Vec z0(nb, 0.0);
  for (std::size_t m = 0; m < M; ++m) {
    double gap = open_total / static_cast<double>(series.times[m].size());
    if (!(gap > 0.0) || !std::isfinite(gap)) gap = 1.0;
    for (std::size_t n = 0; n < M; ++n) z0[m * M + n] = std::log(1.0 / gap);
  }
  const std::size_t outer_max =
      config.outer_max_iter > 0 ? config.outer_max_iter : 200 * nb;

  Rng rng(config.seed);
  std::vector<TraceEntry> trace;
  std::vector<Vec> warm;
  bool have_warm = false;
  double best_f = kInf;
  Mat best_beta;
  std::vector<Vec> best_x;

  const double half_width = config.outer_log_width > 0.0 ? config.outer_log_width : 6.0;
  // Kernels slower than one trading session cannot be told apart from the
  // baseline inside a day and reopen the beta -> 0 degeneracy, so the lower
  // edge never drops below one decay per session (unless the data are so
  // sparse that the initialization itself sits there).
  const double session_floor = std::log(1.0 / calendar.day_length());
  Vec z_lo(nb), z_hi(nb);
  for (std::size_t i = 0; i < nb; ++i) {
    z_lo[i] = std::min(z0[i], std::max(z0[i] - half_width, session_floor));
    z_hi[i] = z0[i] + half_width;
  }
  auto objective = [&](const Vec& z) -> double {
    // Probes outside the identifiable decay window are rejected outright;
    // without the box the NLL decreases without bound along beta -> 0 on
    // multi-day calendars (see OptimConfig::outer_log_width).
    for (std::size_t i = 0; i < nb; ++i)
      if (z[i] < z_lo[i] || z[i] > z_hi[i]) return kInf;
    Mat beta(M, M);
    for (std::size_t i = 0; i < nb; ++i)
      beta.data[i] = std::exp(std::clamp(z[i], -46.0, 46.0));
    const DaygapTables T = daygap_tables(beta, series, calendar);
    std::vector<Vec> starts;
    starts.reserve(M);
    for (std::size_t m = 0; m < M; ++m) {
      if (config.random_inner_init) {
        starts.push_back(random_start(T, series, m, rng, config.param_floor));
      } else if (have_warm) {
        starts.push_back(warm[m]);
      } else {
        starts.push_back(heuristic_start(T, series, m, config.param_floor));
      }
    }
    const auto blocks = solve_blocks(T, starts, config);
    double f = 0.0;
    std::vector<Vec> xs;
    xs.reserve(M);
    for (const auto& b : blocks) {
      f += b.f;
      xs.push_back(b.x);
    }
    warm = xs;
    have_warm = true;
    trace.push_back({beta, f});
    if (f < best_f) {
      best_f = f;
      best_beta = beta;
      best_x = std::move(xs);
    }
    return f;
  };

  const NmOut nm = nelder_mead(objective, z0, 0.25, config.outer_tol, outer_max);

  ExpHawkesParams p;
  p.mu.resize(M);
  p.alpha = Mat(M, M);
  p.beta = best_beta;
  for (std::size_t m = 0; m < M; ++m) {
    p.mu[m] = best_x[m][0];
    for (std::size_t n = 0; n < M; ++n) p.alpha(m, n) = best_x[m][1 + n];
  }
  FitResult r;
  r.params = p;
  r.nll = best_f;
  r.outer_iterations = nm.iterations;
  r.inner_trace = std::move(trace);
  r.converged = nm.converged;
  return r;
}

FitResult fit_bowsher(const EventSeries& series, const TradingCalendar& calendar,
                      const OptimConfig& config, const std::optional<BowsherParams>& init) {
  series.validate();
  calendar.validate();
  if (series.dims() != 1)
    throw std::invalid_argument("overnight-memory fit requires a 1-dimensional series");
  if (series.times[0].size() < 5)
    throw std::invalid_argument("fit requires at least 5 events");

  const double open_seconds = calendar.total_open_seconds();
  const double delta = calendar.day_length();
  const double n_events = static_cast<double>(series.times[0].size());

  // All five parameters are positive, and their natural scales differ by
  // orders of magnitude, so the search runs over logs: steps become relative
  // moves and the only remaining bound is a wide clamp against overflow.
  const double zlo = -46.0, zhi = 46.0;
  auto unpack = [](const Vec& z) {
    BowsherParams b;
    b.mu = std::exp(z[0]);
    b.pi = std::exp(z[1]);
    b.rho = std::exp(z[2]);
    b.alpha = std::exp(z[3]);
    b.beta = std::exp(z[4]);
    return b;
  };
  auto objective = [&](const Vec& z) -> double {
    try {
      return nll_bowsher(unpack(z), series, calendar);
    } catch (const InfeasibleLikelihood&) {
      return 1e100;
    }
  };
  auto clamp_box = [&](double v) { return std::min(zhi, std::max(zlo, v)); };

  Vec x(5);
  {
    Vec raw(5);
    if (init) {
      raw = {init->mu, init->pi, init->rho, init->alpha, init->beta};
    } else {
      const double rate = n_events / open_seconds;
      raw[0] = 0.5 * rate;   // baseline near the raw rate
      raw[1] = 0.5;          // overnight carry
      raw[2] = 3.0 / delta;  // spill decays within a day
      raw[4] = rate;         // kernel decay near the mean gap
      raw[3] = 0.4 * raw[4];  // within-day branching 0.4
    }
    for (std::size_t i = 0; i < 5; ++i)
      x[i] = clamp_box(std::log(std::max(raw[i], 1e-20)));
  }

  double f = objective(x);
  const double h = 1e-5;  // central-difference step in log space
  auto fd_grad = [&](const Vec& at, double fat) {
    Vec g(5, 0.0);
    for (std::size_t i = 0; i < 5; ++i) {
      Vec xp = at;
      xp[i] += h;
      const double fp = objective(xp);
      Vec xm = at;
      xm[i] -= h;
      if (xm[i] < zlo) {
        g[i] = (fp - fat) / h;  // one-sided at the clamp
      } else {
        g[i] = (fp - objective(xm)) / (2.0 * h);
      }
    }
    return g;
  };
  Vec g = fd_grad(x, f);
  auto box_pg = [&](const Vec& at, const Vec& grad) {
    double s = 0.0;
    for (std::size_t i = 0; i < 5; ++i) {
      double gi = grad[i];
      if (at[i] <= zlo && gi > 0.0) gi = 0.0;
      if (at[i] >= zhi && gi < 0.0) gi = 0.0;
      s += gi * gi;
    }
    return std::sqrt(s);
  };

  // Projected L-BFGS with memory 8; the trace records raw parameters.
  std::vector<Vec> ss, ys;
  std::vector<TraceEntry> trace;
  auto record = [&](const Vec& at, double fat) {
    Mat row(1, 5);
    for (std::size_t i = 0; i < 5; ++i) row(0, i) = std::exp(at[i]);
    trace.push_back({row, fat});
  };
  record(x, f);

  auto two_loop = [&](const Vec& grad) {
    Vec q = grad;
    const std::size_t k = ss.size();
    Vec a(k, 0.0);
    for (std::size_t i = k; i-- > 0;) {
      double sy = 0.0, sq = 0.0;
      for (std::size_t j = 0; j < 5; ++j) {
        sy += ss[i][j] * ys[i][j];
        sq += ss[i][j] * q[j];
      }
      a[i] = sq / sy;
      for (std::size_t j = 0; j < 5; ++j) q[j] -= a[i] * ys[i][j];
    }
    if (k > 0) {
      double sy = 0.0, yy = 0.0;
      for (std::size_t j = 0; j < 5; ++j) {
        sy += ss[k - 1][j] * ys[k - 1][j];
        yy += ys[k - 1][j] * ys[k - 1][j];
      }
      const double gamma = sy / std::max(yy, 1e-300);
      for (double& v : q) v *= gamma;
    }
    for (std::size_t i = 0; i < k; ++i) {
      double yq = 0.0, sy = 0.0;
      for (std::size_t j = 0; j < 5; ++j) {
        yq += ys[i][j] * q[j];
        sy += ss[i][j] * ys[i][j];
      }
      const double b = yq / sy;
      for (std::size_t j = 0; j < 5; ++j) q[j] += (a[i] - b) * ss[i][j];
    }
    return q;
  };

  // Backtracking line search along d from x; true when a point satisfying
  // the Armijo decrease is found.
  auto line_search = [&](const Vec& d, Vec& xn, double& fn) {
    double step = 1.0;
    for (int bt = 0; bt < 50; ++bt) {
      double gdx = 0.0;
      for (std::size_t j = 0; j < 5; ++j) {
        xn[j] = clamp_box(x[j] + step * d[j]);
        gdx += g[j] * (xn[j] - x[j]);
      }
      if (gdx < 0.0) {
        fn = objective(xn);
        if (fn <= f + 1e-4 * gdx) return true;
      }
      step *= 0.5;
    }
    return false;
  };

  std::size_t it = 0;
  int stall = 0;
  for (; it < config.inner_max_iter; ++it) {
    if (box_pg(x, g) <= 1e-6 * (1.0 + std::abs(f))) break;

    Vec d = two_loop(g);
    for (double& v : d) v = -v;
    double gd = 0.0;
    for (std::size_t j = 0; j < 5; ++j) gd += g[j] * d[j];
    if (!(gd < 0.0)) {
      for (std::size_t j = 0; j < 5; ++j) d[j] = -g[j];
    }

    Vec xn(5);
    double fn = 0.0;
    bool accepted = line_search(d, xn, fn);
    if (!accepted) {
      // The quasi-Newton direction failed; discard the memory and retry
      // with steepest descent, which near the box only stalls at a
      // stationary point.
      ss.clear();
      ys.clear();
      for (std::size_t j = 0; j < 5; ++j) d[j] = -g[j];
      accepted = line_search(d, xn, fn);
    }
    if (!accepted) break;

    const Vec gn = fd_grad(xn, fn);
    Vec s(5), yv(5);
    double sy = 0.0, snorm = 0.0, ynorm = 0.0;
    for (std::size_t j = 0; j < 5; ++j) {
      s[j] = xn[j] - x[j];
      yv[j] = gn[j] - g[j];
      sy += s[j] * yv[j];
      snorm += s[j] * s[j];
      ynorm += yv[j] * yv[j];
    }
    if (sy > 1e-12 * std::sqrt(snorm * ynorm)) {
      ss.push_back(s);
      ys.push_back(yv);
      if (ss.size() > 8) {
        ss.erase(ss.begin());
        ys.erase(ys.begin());
      }
    }
    const double drop = f - fn;
    x = xn;
    f = fn;
    g = gn;
    record(x, f);
    // Only machine-precision drops count as stagnation; the gradient test
    // above is the real convergence criterion.
    if (drop <= 1e-12 * std::max(1.0, std::abs(f))) {
      if (++stall >= 5) {
        ++it;
        break;
      }
    } else {
      stall = 0;
    }
  }

  FitResult r;
  r.params = unpack(x);
  r.nll = f;
  r.outer_iterations = it;
  r.inner_trace = std::move(trace);
  r.converged = box_pg(x, g) <= 1e-5 * (1.0 + std::abs(f));
  return r;
}

}  // namespace hawkes
