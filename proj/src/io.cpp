#include "hawkes/io.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "hawkes/rng.hpp"

namespace hawkes {
namespace {

std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

Vec parse_doubles(const std::string& s, const std::string& key) {
  Vec out;
  std::stringstream ss(s);
  std::string tok;
  while (ss >> tok) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(tok, &used));
      if (used != tok.size()) throw std::invalid_argument(tok);
    } catch (const std::exception&) {
      throw std::runtime_error("params: bad number '" + tok + "' for " + key);
    }
  }
  if (out.empty()) throw std::runtime_error("params: no values for " + key);
  return out;
}

using KvMap = std::map<std::string, std::string>;

KvMap read_kv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  KvMap kv;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::runtime_error(path + " line " + std::to_string(lineno) +
                               ": expected key = value");
    kv[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }
  return kv;
}

Mat read_matrix(const KvMap& kv, const std::string& name, std::size_t dims) {
  Mat m(dims, dims);
  for (std::size_t r = 0; r < dims; ++r) {
    const std::string key = name + ".row" + std::to_string(r);
    auto it = kv.find(key);
    if (it == kv.end()) throw std::runtime_error("params: missing " + key);
    const Vec row = parse_doubles(it->second, key);
    if (row.size() != dims)
      throw std::runtime_error("params: " + key + " must have " + std::to_string(dims) +
                               " entries");
    for (std::size_t c = 0; c < dims; ++c) m(r, c) = row[c];
  }
  return m;
}

double get_scalar(const KvMap& kv, const std::string& key) {
  auto it = kv.find(key);
  if (it == kv.end()) throw std::runtime_error("params: missing " + key);
  const Vec v = parse_doubles(it->second, key);
  if (v.size() != 1) throw std::runtime_error("params: " + key + " must be a single number");
  return v[0];
}

void write_matrix(std::ostream& out, const std::string& name, const Mat& m) {
  for (std::size_t r = 0; r < m.rows; ++r) {
    out << name << ".row" << r << " =";
    for (std::size_t c = 0; c < m.cols; ++c) out << " " << fmt(m(r, c));
    out << "\n";
  }
}

}  // namespace

ModelParams read_params_file(const std::string& path) {
  const KvMap kv = read_kv(path);
  auto model_it = kv.find("model");
  const std::string model = model_it == kv.end() ? "hawkes" : model_it->second;
  if (model == "bowsher") {
    BowsherParams p;
    p.mu = get_scalar(kv, "mu");
    p.pi = get_scalar(kv, "pi");
    p.rho = get_scalar(kv, "rho");
    p.alpha = get_scalar(kv, "alpha");
    p.beta = get_scalar(kv, "beta");
    p.validate();
    return p;
  }
  auto mu_it = kv.find("mu");
  if (mu_it == kv.end()) throw std::runtime_error("params: missing mu");
  ExpHawkesParams p;
  p.mu = parse_doubles(mu_it->second, "mu");
  auto dims_it = kv.find("dims");
  if (dims_it != kv.end() &&
      static_cast<std::size_t>(get_scalar(kv, "dims")) != p.mu.size())
    throw std::runtime_error("params: dims does not match mu length");
  p.alpha = read_matrix(kv, "alpha", p.mu.size());
  p.beta = read_matrix(kv, "beta", p.mu.size());
  p.validate();
  return p;
}

void write_params_file(const std::string& path, const ModelParams& params) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  if (std::holds_alternative<BowsherParams>(params)) {
    const auto& p = std::get<BowsherParams>(params);
    out << "model = bowsher\n";
    out << "mu = " << fmt(p.mu) << "\npi = " << fmt(p.pi) << "\nrho = " << fmt(p.rho)
        << "\nalpha = " << fmt(p.alpha) << "\nbeta = " << fmt(p.beta) << "\n";
    return;
  }
  const auto& p = std::get<ExpHawkesParams>(params);
  out << "model = hawkes\n";
  out << "dims = " << p.dims() << "\n";
  out << "mu =";
  for (double v : p.mu) out << " " << fmt(v);
  out << "\n";
  write_matrix(out, "alpha", p.alpha);
  write_matrix(out, "beta", p.beta);
}

void write_events_csv(const std::string& path, const EventSeries& series) {
  series.validate();
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << "# dims=" << series.dims() << "\n";
  out << "# horizon=" << fmt(series.horizon) << "\n";
  out << "timestamp_seconds,dimension\n";
  std::vector<std::pair<double, std::size_t>> merged;
  merged.reserve(series.total_events());
  for (std::size_t i = 0; i < series.dims(); ++i)
    for (double t : series.times[i]) merged.emplace_back(t, i);
  std::sort(merged.begin(), merged.end());
  for (const auto& [t, i] : merged) out << fmt(t) << "," << i << "\n";
}

EventSeries read_events_csv(const std::string& path, std::size_t dims_hint) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  EventSeries s;
  std::size_t dims = dims_hint;
  double horizon = 0.0;
  bool have_horizon = false;
  std::string line;
  std::size_t lineno = 0;
  bool header_seen = false;
  double max_t = 0.0;
  std::vector<std::pair<double, std::size_t>> rows;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty()) continue;
    if (t[0] == '#') {
      const auto eq = t.find('=');
      if (eq != std::string::npos) {
        const std::string key = trim(t.substr(1, eq - 1));
        const std::string val = trim(t.substr(eq + 1));
        if (key == "dims") dims = std::max<std::size_t>(dims, std::stoul(val));
        if (key == "horizon") {
          horizon = std::stod(val);
          have_horizon = true;
        }
      }
      continue;
    }
    if (!header_seen) {
      if (t != "timestamp_seconds,dimension")
        throw std::runtime_error(path + " line " + std::to_string(lineno) +
                                 ": expected header timestamp_seconds,dimension");
      header_seen = true;
      continue;
    }
    const auto comma = t.find(',');
    if (comma == std::string::npos)
      throw std::runtime_error(path + " line " + std::to_string(lineno) + ": expected 2 fields");
    try {
      const double ts = std::stod(trim(t.substr(0, comma)));
      const std::size_t dim = std::stoul(trim(t.substr(comma + 1)));
      rows.emplace_back(ts, dim);
      dims = std::max(dims, dim + 1);
      max_t = std::max(max_t, ts);
    } catch (const std::exception&) {
      throw std::runtime_error(path + " line " + std::to_string(lineno) + ": bad row '" + t + "'");
    }
  }
  if (dims == 0) throw std::runtime_error(path + ": no events and no dims header");
  s.times.resize(dims);
  for (const auto& [ts, dim] : rows) s.times[dim].push_back(ts);
  for (auto& v : s.times) std::sort(v.begin(), v.end());
  s.horizon = have_horizon ? horizon : max_t;
  s.validate();
  return s;
}

void write_calendar_csv(const std::string& path, const TradingCalendar& calendar) {
  calendar.validate();
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << "open_seconds,close_seconds\n";
  for (const auto& iv : calendar.intervals)
    out << fmt(iv.open) << "," << fmt(iv.close) << "\n";
}

TradingCalendar read_calendar_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  TradingCalendar cal;
  std::string line;
  std::size_t lineno = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    if (!header_seen) {
      if (t != "open_seconds,close_seconds")
        throw std::runtime_error(path + " line " + std::to_string(lineno) +
                                 ": expected header open_seconds,close_seconds");
      header_seen = true;
      continue;
    }
    const auto comma = t.find(',');
    if (comma == std::string::npos)
      throw std::runtime_error(path + " line " + std::to_string(lineno) + ": expected 2 fields");
    cal.intervals.push_back(
        {std::stod(trim(t.substr(0, comma))), std::stod(trim(t.substr(comma + 1)))});
  }
  cal.validate();
  return cal;
}

void write_fit_report(const std::string& path, const FitResult& result,
                      const std::string& model_name, const std::vector<std::string>& labels) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << "model = " << model_name << "\n";
  out << "converged = " << (result.converged ? "true" : "false") << "\n";
  out << "nll = " << fmt(result.nll) << "\n";
  out << "outer_iterations = " << result.outer_iterations << "\n";

  if (std::holds_alternative<ExpHawkesParams>(result.params)) {
    const auto& p = std::get<ExpHawkesParams>(result.params);
    out << "dims = " << p.dims() << "\n";
    for (std::size_t i = 0; i < labels.size() && i < p.dims(); ++i)
      out << "label." << i << " = " << labels[i] << "\n";
    out << "mu =";
    for (double v : p.mu) out << " " << fmt(v);
    out << "\n";
    write_matrix(out, "alpha", p.alpha);
    write_matrix(out, "beta", p.beta);
    // Branching matrix of the exponential kernel equals alpha.
    write_matrix(out, "branching", p.alpha);
    out << "mu_inv_minutes =";
    for (double v : p.mu) out << " " << fmt(v > 0.0 ? 1.0 / v / 60.0 : 0.0);
    out << "\n";
    Mat binv(p.dims(), p.dims());
    for (std::size_t r = 0; r < p.dims(); ++r)
      for (std::size_t c = 0; c < p.dims(); ++c)
        binv(r, c) = p.beta(r, c) > 0.0 ? 1.0 / p.beta(r, c) / 60.0 : 0.0;
    write_matrix(out, "beta_inv_minutes", binv);
  } else {
    const auto& p = std::get<BowsherParams>(result.params);
    out << "mu = " << fmt(p.mu) << "\npi = " << fmt(p.pi) << "\nrho = " << fmt(p.rho)
        << "\nalpha = " << fmt(p.alpha) << "\nbeta = " << fmt(p.beta) << "\n";
    out << "branching_within_day = " << fmt(p.beta > 0.0 ? p.alpha / p.beta : 0.0) << "\n";
    out << "mu_inv_minutes = " << fmt(p.mu > 0.0 ? 1.0 / p.mu / 60.0 : 0.0) << "\n";
    out << "beta_inv_minutes = " << fmt(p.beta > 0.0 ? 1.0 / p.beta / 60.0 : 0.0) << "\n";
  }

  out << "trace.count = " << result.inner_trace.size() << "\n";
  for (std::size_t i = 0; i < result.inner_trace.size(); ++i) {
    const auto& e = result.inner_trace[i];
    out << "trace." << i << ".nll = " << fmt(e.inner_nll) << "\n";
    write_matrix(out, "trace." + std::to_string(i) + ".beta", e.beta);
  }
}

std::uint64_t fnv1a64_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::uint64_t h = 1469598103934665603ULL;
  char buf[65536];
  while (in.read(buf, sizeof buf) || in.gcount() > 0) {
    const std::streamsize n = in.gcount();
    for (std::streamsize i = 0; i < n; ++i) {
      h ^= static_cast<unsigned char>(buf[i]);
      h *= 1099511628211ULL;
    }
    if (!in) break;
  }
  return h;
}

void write_run_metadata(const std::string& out_path, const std::string& command_line,
                        std::uint64_t seed, const std::vector<std::string>& input_paths,
                        const std::map<std::string, std::string>& settings) {
  nlohmann::json j;
  j["tool"] = "hawkes";
  j["version"] = kToolVersion;
  j["command"] = command_line;
  j["seed"] = seed;
  j["rng"] = kRngId;
  nlohmann::json inputs = nlohmann::json::object();
  for (const auto& p : input_paths) {
    char buf[24];
    std::snprintf(buf, sizeof buf, "0x%016llx",
                  static_cast<unsigned long long>(fnv1a64_file(p)));
    inputs[p] = buf;
  }
  j["inputs"] = inputs;
  j["settings"] = settings;
  std::ofstream out(out_path + ".meta.json");
  if (!out) throw std::runtime_error("cannot write " + out_path + ".meta.json");
  out << j.dump(2) << "\n";
}

}  // namespace hawkes
