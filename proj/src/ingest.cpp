#include "hawkes/ingest.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>

namespace hawkes {
namespace {

// Days since 1970-01-01 for a civil date (Howard Hinnant's algorithm).
long long days_from_civil(int y, int m, int d) {
  y -= m <= 2;
  const long long era = (y >= 0 ? y : y - 399) / 400;
  const unsigned yoe = static_cast<unsigned>(y - era * 400);
  const unsigned doy = (153u * static_cast<unsigned>(m + (m > 2 ? -3 : 9)) + 2u) / 5u +
                       static_cast<unsigned>(d) - 1u;
  const unsigned doe = yoe * 365u + yoe / 4u - yoe / 100u + doy;
  return era * 146097LL + static_cast<long long>(doe) - 719468LL;
}

void civil_from_days(long long z, int& y, int& m, int& d) {
  z += 719468LL;
  const long long era = (z >= 0 ? z : z - 146096LL) / 146097LL;
  const unsigned doe = static_cast<unsigned>(z - era * 146097LL);
  const unsigned yoe = (doe - doe / 1460u + doe / 36524u - doe / 146096u) / 365u;
  const long long yy = static_cast<long long>(yoe) + era * 400LL;
  const unsigned doy = doe - (365u * yoe + yoe / 4u - yoe / 100u);
  const unsigned mp = (5u * doy + 2u) / 153u;
  d = static_cast<int>(doy - (153u * mp + 2u) / 5u + 1u);
  m = static_cast<int>(mp < 10 ? mp + 3 : mp - 9);
  y = static_cast<int>(yy + (m <= 2));
}

struct ParsedTs {
  int y = 0, mo = 0, d = 0;
  double sec_of_day = 0.0;
  int offset_min = 0;
  bool has_offset = false;
};

bool parse_int(std::string_view s, std::size_t pos, std::size_t len, int& out) {
  if (pos + len > s.size()) return false;
  auto [p, ec] = std::from_chars(s.data() + pos, s.data() + pos + len, out);
  return ec == std::errc() && p == s.data() + pos + len;
}

// YYYY-MM-DD{T or space}HH:MM:SS[.frac][Z|+HH:MM|+HHMM|+HH]
bool parse_iso8601(std::string_view s, ParsedTs& out) {
  if (s.size() < 19) return false;
  if (!parse_int(s, 0, 4, out.y) || s[4] != '-' || !parse_int(s, 5, 2, out.mo) ||
      s[7] != '-' || !parse_int(s, 8, 2, out.d))
    return false;
  if (s[10] != 'T' && s[10] != ' ') return false;
  int hh = 0, mm = 0, ss = 0;
  if (!parse_int(s, 11, 2, hh) || s[13] != ':' || !parse_int(s, 14, 2, mm) ||
      s[16] != ':' || !parse_int(s, 17, 2, ss))
    return false;
  if (out.mo < 1 || out.mo > 12 || out.d < 1 || out.d > 31 || hh > 23 || mm > 59 || ss > 60)
    return false;
  double frac = 0.0;
  std::size_t pos = 19;
  if (pos < s.size() && s[pos] == '.') {
    ++pos;
    double scale = 0.1;
    bool any = false;
    while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) {
      frac += scale * (s[pos] - '0');
      scale *= 0.1;
      ++pos;
      any = true;
    }
    if (!any) return false;
  }
  out.sec_of_day = hh * 3600.0 + mm * 60.0 + ss + frac;
  out.has_offset = false;
  out.offset_min = 0;
  if (pos == s.size()) return true;
  if (s[pos] == 'Z') {
    out.has_offset = true;
    return pos + 1 == s.size();
  }
  if (s[pos] == '+' || s[pos] == '-') {
    const int sign = s[pos] == '+' ? 1 : -1;
    ++pos;
    int oh = 0, om = 0;
    if (!parse_int(s, pos, 2, oh)) return false;
    pos += 2;
    if (pos < s.size() && s[pos] == ':') ++pos;
    if (pos < s.size()) {
      if (!parse_int(s, pos, 2, om)) return false;
      pos += 2;
    }
    if (pos != s.size()) return false;
    out.has_offset = true;
    out.offset_min = sign * (oh * 60 + om);
    return true;
  }
  return false;
}

// Normalize to market-local wall clock: zoned timestamps shift to UTC and
// then by the configured market offset; naive ones are already market-local.
void to_market_local(ParsedTs& ts, int market_offset_min) {
  if (!ts.has_offset) return;
  const int shift_min = market_offset_min - ts.offset_min;
  if (shift_min == 0) return;
  long long days = days_from_civil(ts.y, ts.mo, ts.d);
  double sec = ts.sec_of_day + shift_min * 60.0;
  while (sec < 0.0) {
    sec += 86400.0;
    --days;
  }
  while (sec >= 86400.0) {
    sec -= 86400.0;
    ++days;
  }
  civil_from_days(days, ts.y, ts.mo, ts.d);
  ts.sec_of_day = sec;
}

std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) out.push_back(item);
  if (!s.empty() && s.back() == sep) out.emplace_back();
  return out;
}

bool is_roll_or_switch(const std::vector<std::string>& flags) {
  for (const auto& f : flags) {
    std::string low;
    low.reserve(f.size());
    for (char c : f) low.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    if (low.find("roll") != std::string::npos || low.find("switch") != std::string::npos)
      return true;
  }
  return false;
}

[[noreturn]] void die(std::size_t line, const std::string& msg) {
  throw std::runtime_error("line " + std::to_string(line) + ": " + msg);
}

}  // namespace

std::vector<TradeRecord> parse_trades(const std::string& path, const IngestConfig& config,
                                      ParseStats* stats) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);

  std::string line;
  std::size_t lineno = 0;
  if (!std::getline(in, line)) throw std::runtime_error(path + ": empty file");
  ++lineno;
  {
    const std::string h = trim(line);
    if (h != "timestamp,index,volume" && h != "timestamp,index,volume,flags")
      die(lineno, "expected header timestamp,index,volume[,flags], got '" + h + "'");
  }

  std::set<std::string> allowed(config.index_filter.begin(), config.index_filter.end());
  std::vector<TradeRecord> out;
  ParseStats st;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    ++st.rows;
    auto fields = split(line, ',');
    if (fields.size() != 3 && fields.size() != 4)
      die(lineno, "expected 3 or 4 fields, got " + std::to_string(fields.size()));

    TradeRecord rec;
    ParsedTs ts;
    const std::string raw_ts = trim(fields[0]);
    if (!parse_iso8601(raw_ts, ts)) die(lineno, "bad timestamp '" + raw_ts + "'");
    to_market_local(ts, config.utc_offset_minutes);
    rec.year = ts.y;
    rec.month = ts.mo;
    rec.day = ts.d;
    rec.seconds_of_day = ts.sec_of_day;

    rec.index_code = trim(fields[1]);
    if (rec.index_code.empty()) die(lineno, "empty index code");
    if (!allowed.empty() && allowed.count(rec.index_code) == 0)
      die(lineno, "unknown index code '" + rec.index_code + "'");

    const std::string vol = trim(fields[2]);
    try {
      std::size_t used = 0;
      rec.volume = std::stod(vol, &used);
      if (used != vol.size()) throw std::invalid_argument(vol);
    } catch (const std::exception&) {
      die(lineno, "bad volume '" + vol + "'");
    }
    if (!(rec.volume >= 0.0) || !std::isfinite(rec.volume))
      die(lineno, "negative volume '" + vol + "'");

    if (fields.size() == 4) {
      for (auto& f : split(trim(fields[3]), ';'))
        if (!trim(f).empty()) rec.flags.push_back(trim(f));
    }
    if (is_roll_or_switch(rec.flags)) {
      ++st.flagged_dropped;
      continue;
    }
    out.push_back(std::move(rec));
  }
  if (stats != nullptr) *stats = st;
  return out;
}

BuildResult build_series(const std::vector<TradeRecord>& records, const IngestConfig& config) {
  if (records.empty()) throw std::invalid_argument("build_series: no records");
  if (!(config.open_seconds < config.close_seconds))
    throw std::invalid_argument("build_series: open must precede close");
  const double delta = config.close_seconds - config.open_seconds;

  // One session per distinct trade date, positioned by civil-day distance
  // from the first date so weekends and holidays become real gaps.
  std::vector<long long> dates;
  dates.reserve(records.size());
  for (const auto& r : records) dates.push_back(days_from_civil(r.year, r.month, r.day));
  std::vector<long long> uniq = dates;
  std::sort(uniq.begin(), uniq.end());
  uniq.erase(std::unique(uniq.begin(), uniq.end()), uniq.end());
  std::map<long long, std::size_t> day_index;
  for (std::size_t i = 0; i < uniq.size(); ++i) day_index[uniq[i]] = i;

  TradingCalendar cal;
  for (long long d : uniq) {
    const double off = static_cast<double>(d - uniq.front()) * 86400.0;
    cal.intervals.push_back({off, off + delta});
  }
  cal.validate();

  // Dimension labels.
  std::vector<std::string> labels;
  std::map<std::string, std::size_t> code_dim;
  if (config.split == SplitMode::by_index) {
    if (!config.index_filter.empty()) {
      labels = config.index_filter;
    } else {
      std::set<std::string> codes;
      for (const auto& r : records) codes.insert(r.index_code);
      labels.assign(codes.begin(), codes.end());
    }
    for (std::size_t i = 0; i < labels.size(); ++i) code_dim[labels[i]] = i;
  } else {
    std::set<std::string> codes;
    for (const auto& r : records) codes.insert(r.index_code);
    if (codes.size() != 1)
      throw std::invalid_argument("volume-bin split requires records from exactly one index");
    const auto& e = config.volume_edges;
    for (std::size_t i = 0; i + 1 < e.size(); ++i)
      if (!(e[i] < e[i + 1]))
        throw std::invalid_argument("volume edges must be strictly ascending");
    for (std::size_t b = 0; b <= e.size(); ++b) {
      std::ostringstream lab;
      lab << "vol[" << (b == 0 ? 0.0 : e[b - 1]) << ",";
      if (b == e.size())
        lab << "inf)";
      else
        lab << e[b] << ")";
      labels.push_back(lab.str());
    }
  }

  BuildResult res;
  res.calendar = cal;
  res.labels = labels;
  res.series.times.resize(labels.size());

  for (std::size_t r = 0; r < records.size(); ++r) {
    const auto& rec = records[r];
    if (rec.seconds_of_day < config.open_seconds || rec.seconds_of_day >= config.close_seconds) {
      ++res.dropped_out_of_hours;
      continue;
    }
    std::size_t dim;
    if (config.split == SplitMode::by_index) {
      auto it = code_dim.find(rec.index_code);
      if (it == code_dim.end())
        throw std::invalid_argument("unknown index code '" + rec.index_code + "'");
      dim = it->second;
    } else {
      const auto& e = config.volume_edges;
      dim = e.size();  // last bin unless an edge exceeds the volume
      for (std::size_t b = 0; b < e.size(); ++b) {
        if (rec.volume < e[b]) {
          dim = b;
          break;
        }
      }
    }
    const double t = cal.intervals[day_index[dates[r]]].open +
                     (rec.seconds_of_day - config.open_seconds);
    res.series.times[dim].push_back(t);
  }

  for (auto& ts : res.series.times) {
    std::sort(ts.begin(), ts.end());
    if (config.tie_policy == TiePolicy::drop) {
      std::vector<double> kept;
      kept.reserve(ts.size());
      for (double t : ts) {
        if (!kept.empty() && t == kept.back()) {
          ++res.tie_dropped;
          continue;
        }
        kept.push_back(t);
      }
      ts = std::move(kept);
    } else {
      for (std::size_t k = 1; k < ts.size(); ++k)
        if (ts[k] <= ts[k - 1]) ts[k] = ts[k - 1] + 1e-6;
    }
  }

  res.series.horizon = cal.intervals.back().close;
  res.series.validate();
  return res;
}

std::vector<double> auto_volume_edges(const std::vector<TradeRecord>& records, std::size_t k) {
  if (k < 2) throw std::invalid_argument("auto_volume_edges: need k >= 2");
  std::vector<double> lv;
  lv.reserve(records.size());
  for (const auto& r : records) {
    if (!(r.volume > 0.0))
      throw std::invalid_argument("auto_volume_edges: volumes must be positive");
    lv.push_back(std::log(r.volume));
  }
  if (lv.size() < k) throw std::invalid_argument("auto_volume_edges: fewer records than bins");
  std::sort(lv.begin(), lv.end());

  // Quantile-seeded 1-D Lloyd iterations; deterministic.
  Vec centers(k);
  for (std::size_t i = 0; i < k; ++i) {
    const double h = (static_cast<double>(lv.size()) - 1.0) *
                     ((static_cast<double>(i) + 0.5) / static_cast<double>(k));
    const std::size_t lo = static_cast<std::size_t>(h);
    const double frac = h - static_cast<double>(lo);
    centers[i] = lo + 1 < lv.size() ? lv[lo] + frac * (lv[lo + 1] - lv[lo]) : lv.back();
  }
  for (int iter = 0; iter < 100; ++iter) {
    Vec sum(k, 0.0);
    std::vector<std::size_t> cnt(k, 0);
    for (double v : lv) {
      std::size_t best = 0;
      double bd = std::abs(v - centers[0]);
      for (std::size_t c = 1; c < k; ++c) {
        const double d = std::abs(v - centers[c]);
        if (d < bd) {
          bd = d;
          best = c;
        }
      }
      sum[best] += v;
      ++cnt[best];
    }
    bool moved = false;
    for (std::size_t c = 0; c < k; ++c) {
      if (cnt[c] == 0) continue;
      const double nc = sum[c] / static_cast<double>(cnt[c]);
      moved |= std::abs(nc - centers[c]) > 1e-12;
      centers[c] = nc;
    }
    if (!moved) break;
  }
  std::sort(centers.begin(), centers.end());
  std::vector<double> edges;
  edges.reserve(k - 1);
  for (std::size_t c = 0; c + 1 < k; ++c)
    edges.push_back(std::exp(0.5 * (centers[c] + centers[c + 1])));
  return edges;
}

}  // namespace hawkes
