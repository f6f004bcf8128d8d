#pragma once

// Synthetic trade-feed fixture shaped like a small public credit-index feed:
// three indices, ten trading days over two calendar weeks (weekend gap),
// 07:00-17:00 sessions, lognormal volume mixture, a few flagged roll/switch
// rows that ingestion must drop. Event times come from the library's own
// session simulator under known parameters, so a fit of the ingested series
// can be scored against the generating truth. data/synthetic_trades.csv is
// exactly make_trades_fixture(1).csv.

#include <cstdio>
#include <string>
#include <vector>

#include "hawkes/rng.hpp"
#include "hawkes/simulate.hpp"
#include "hawkes/types.hpp"

namespace testutil {

struct TradesFixture {
  hawkes::ExpHawkesParams truth;
  hawkes::TradingCalendar calendar;
  std::vector<std::string> dates;
  std::vector<std::string> labels;
  hawkes::EventSeries series;  // what ingestion should reconstruct
  std::string csv;
};

inline TradesFixture make_trades_fixture(std::uint64_t seed) {
  using namespace hawkes;
  TradesFixture f;

  f.truth.mu = {1.0 / 600.0, 1.0 / 750.0, 1.0 / 900.0};
  f.truth.alpha = Mat(3, 3);
  f.truth.beta = Mat(3, 3);
  const double a[3][3] = {{0.35, 0.2, 0.2}, {0.2, 0.35, 0.2}, {0.2, 0.2, 0.35}};
  const double b[3][3] = {{1.0 / 60.0, 1.0 / 120.0, 1.0 / 90.0},
                          {1.0 / 120.0, 1.0 / 75.0, 1.0 / 150.0},
                          {1.0 / 90.0, 1.0 / 150.0, 1.0 / 100.0}};
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) {
      f.truth.alpha(i, j) = a[i][j];
      f.truth.beta(i, j) = b[i][j];
    }

  f.dates = {"2024-03-04", "2024-03-05", "2024-03-06", "2024-03-07", "2024-03-08",
             "2024-03-11", "2024-03-12", "2024-03-13", "2024-03-14", "2024-03-15"};
  const int day_offsets[] = {0, 1, 2, 3, 4, 7, 8, 9, 10, 11};
  const double open_sod = 7.0 * 3600.0, close_sod = 17.0 * 3600.0;
  for (int off : day_offsets)
    // Anchored at the first day's open, matching how trade ingestion lays
    // out its timeline, so a round trip through CSV reproduces the series.
    f.calendar.intervals.push_back({off * 86400.0, off * 86400.0 + (close_sod - open_sod)});

  f.labels = {"ITXEB", "ITXES", "ITXEX"};

  SimConfig cfg;
  cfg.seed = seed;
  cfg.horizon = f.calendar.intervals.back().close;
  f.series = simulate_daygap(f.truth, f.calendar, cfg);

  struct Row {
    double t = 0.0;
    std::size_t dim = 0;
    double volume = 0.0;
    const char* flag = "";
  };
  std::vector<Row> rows;
  Rng aux(seed + 1000);  // volumes and noise rows; event times stay untouched
  for (std::size_t i = 0; i < 3; ++i)
    for (double t : f.series.times[i]) {
      // three lognormal volume clusters, loosely small/medium/block trades
      const double u = aux.uniform();
      const double center = u < 0.5 ? 2.5 : (u < 0.85 ? 4.5 : 6.5);
      rows.push_back({t, i, std::exp(center + 0.35 * aux.normal()), ""});
    }
  // flagged rows that ingestion must drop before any modelling
  for (int k = 0; k < 15; ++k) {
    const std::size_t d = static_cast<std::size_t>(aux.uniform() * 10.0);
    const auto& iv = f.calendar.intervals[d];
    Row r;
    r.t = iv.open + aux.uniform() * (iv.close - iv.open) * 0.99;
    r.dim = static_cast<std::size_t>(aux.uniform() * 3.0);
    r.volume = std::exp(4.0 + aux.normal());
    r.flag = (k % 2 == 0) ? "roll" : "index_switch";
    rows.push_back(r);
  }
  std::sort(rows.begin(), rows.end(), [](const Row& x, const Row& y) { return x.t < y.t; });

  std::string csv = "timestamp,index,volume,flags\n";
  for (const auto& r : rows) {
    std::size_t d = 0;
    while (f.calendar.intervals[d].close < r.t) ++d;
    const double sod = open_sod + (r.t - f.calendar.intervals[d].open);
    const int hh = static_cast<int>(sod / 3600.0);
    const int mm = static_cast<int>((sod - hh * 3600.0) / 60.0);
    const double ss = sod - hh * 3600.0 - mm * 60.0;
    char buf[128];
    std::snprintf(buf, sizeof buf, "%sT%02d:%02d:%012.9f,%s,%.2f,%s\n",
                  f.dates[d].c_str(), hh, mm, ss, f.labels[r.dim].c_str(), r.volume, r.flag);
    csv += buf;
  }
  f.csv = std::move(csv);
  return f;
}

}  // namespace testutil
