#pragma once

// Trade-feed ingestion: CSV with header timestamp,index,volume[,flags] into
// an EventSeries plus matching TradingCalendar. Timestamps are ISO-8601;
// naive ones are taken as market-local wall clock, zoned ones are converted
// to market-local using a fixed UTC offset from the config (no tz database
// on this toolchain, so DST transitions inside a dataset are out of scope).

#include <cstddef>
#include <string>
#include <vector>

#include "hawkes/types.hpp"

namespace hawkes {

struct TradeRecord {
  // Market-local wall clock.
  int year = 0;
  int month = 0;
  int day = 0;
  double seconds_of_day = 0.0;
  std::string index_code;
  double volume = 0.0;
  std::vector<std::string> flags;
};

enum class SplitMode { by_index, by_volume_bin };
enum class TiePolicy { drop, jitter };

struct IngestConfig {
  double open_seconds = 7.0 * 3600.0;   // session open, seconds of day
  double close_seconds = 17.0 * 3600.0; // session close
  int utc_offset_minutes = 0;           // market-local minus UTC
  std::vector<std::string> index_filter; // empty accepts any code
  SplitMode split = SplitMode::by_index;
  TiePolicy tie_policy = TiePolicy::drop;
  std::vector<double> volume_edges;     // ascending interior edges for volume bins
};

struct ParseStats {
  std::size_t rows = 0;            // data rows seen
  std::size_t flagged_dropped = 0; // roll/switch rows removed
};

// Parses the file or throws std::runtime_error naming the offending line.
// Rows whose flags mention roll or switch markers are dropped and counted.
std::vector<TradeRecord> parse_trades(const std::string& path, const IngestConfig& config,
                                      ParseStats* stats = nullptr);

struct BuildResult {
  EventSeries series;
  TradingCalendar calendar;           // one interval per distinct trade date
  std::vector<std::string> labels;    // per-dimension: index code or volume bin
  std::size_t dropped_out_of_hours = 0;
  std::size_t tie_dropped = 0;        // removed by TiePolicy::drop
};

// Maps records onto seconds since the first day's open (gaps between dates
// kept: day k opens at k-th distinct date offset). Events outside
// [open, close) are dropped and counted. Within a dimension, equal
// timestamps are resolved per tie_policy: drop removes duplicates, jitter
// nudges each later one +1e-6 s. Volume-bin splitting requires records from
// exactly one index.
BuildResult build_series(const std::vector<TradeRecord>& records, const IngestConfig& config);

// Interior bin edges from 1-D k-means (Lloyd) on log-volume; deterministic
// quantile initialization. Returns k-1 ascending edges.
std::vector<double> auto_volume_edges(const std::vector<TradeRecord>& records, std::size_t k);

}  // namespace hawkes
