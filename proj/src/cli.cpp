#include "hawkes/cli.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "hawkes/core.hpp"
#include "hawkes/gof.hpp"
#include "hawkes/ingest.hpp"
#include "hawkes/io.hpp"
#include "hawkes/likelihood.hpp"
#include "hawkes/optimize.hpp"
#include "hawkes/simulate.hpp"

namespace hawkes {
namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

// Full round-trip precision, for numeric grids consumed by other tools.
std::string fmt_full(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double parse_hhmm(const std::string& s) {
  int hh = 0, mm = 0;
  if (std::sscanf(s.c_str(), "%d:%d", &hh, &mm) != 2 || hh < 0 || hh > 23 || mm < 0 || mm > 59)
    throw std::runtime_error("bad time of day '" + s + "', expected HH:MM");
  return hh * 3600.0 + mm * 60.0;
}

std::vector<double> parse_csv_doubles(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) out.push_back(std::stod(tok));
  return out;
}

std::vector<std::string> parse_csv_strings(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) out.push_back(tok);
  return out;
}

Mat parse_matrix_arg(const std::string& s) {
  std::vector<Vec> rows;
  std::stringstream ss(s);
  std::string row;
  while (std::getline(ss, row, ';')) rows.push_back(parse_csv_doubles(row));
  if (rows.empty()) throw std::runtime_error("empty matrix argument");
  Mat m(rows.size(), rows[0].size());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != m.cols) throw std::runtime_error("ragged matrix argument");
    for (std::size_t c = 0; c < m.cols; ++c) m(r, c) = rows[r][c];
  }
  return m;
}

std::pair<std::size_t, std::size_t> parse_coord(const std::string& s) {
  unsigned r = 0, c = 0;
  if (std::sscanf(s.c_str(), "%u,%u", &r, &c) != 2)
    throw std::runtime_error("bad coordinate '" + s + "', expected row,col");
  return {r, c};
}

// Ingestion knobs shared by every command that reads event data.
struct InputOptions {
  std::string events_path;
  std::string calendar_path;
  std::string open_time = "07:00";
  std::string close_time = "17:00";
  std::string tie_policy = "drop";
  std::string indices;
  std::string split = "by-index";
  std::string bins;
  std::size_t auto_bins = 0;
  int utc_offset_minutes = 0;
  std::size_t dims_hint = 0;
  double horizon_override = 0.0;
};

void add_input_options(CLI::App* cmd, InputOptions& io) {
  cmd->add_option("--events", io.events_path, "event CSV or trade-feed CSV")->required();
  cmd->add_option("--calendar", io.calendar_path, "trading calendar CSV");
  cmd->add_option("--open-time", io.open_time, "session open HH:MM for trade feeds");
  cmd->add_option("--close-time", io.close_time, "session close HH:MM for trade feeds");
  cmd->add_option("--tie-policy", io.tie_policy, "drop|jitter for equal timestamps");
  cmd->add_option("--indices", io.indices, "comma-separated index filter");
  cmd->add_option("--split", io.split, "by-index|by-volume-bin for trade feeds");
  cmd->add_option("--bins", io.bins, "comma-separated interior volume edges");
  cmd->add_option("--auto-bins", io.auto_bins, "derive K volume bins by k-means");
  cmd->add_option("--utc-offset-minutes", io.utc_offset_minutes,
                  "market-local minus UTC, applied to zoned timestamps");
  cmd->add_option("--dims", io.dims_hint, "dimension count hint for event CSVs");
  cmd->add_option("--horizon", io.horizon_override, "override the series horizon (seconds)");
}

struct LoadedInput {
  EventSeries series;
  std::optional<TradingCalendar> calendar;
  std::vector<std::string> labels;
  bool from_trades = false;
};

bool looks_like_trades(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::string line;
  while (std::getline(in, line)) {
    std::size_t b = line.find_first_not_of(" \t\r");
    if (b == std::string::npos) continue;
    if (line[b] == '#') continue;
    return line.rfind("timestamp,index,volume", b) == b;
  }
  throw std::runtime_error(path + ": no header line found");
}

LoadedInput load_input(const InputOptions& io) {
  LoadedInput out;
  if (looks_like_trades(io.events_path)) {
    IngestConfig cfg;
    cfg.open_seconds = parse_hhmm(io.open_time);
    cfg.close_seconds = parse_hhmm(io.close_time);
    cfg.utc_offset_minutes = io.utc_offset_minutes;
    if (!io.indices.empty()) cfg.index_filter = parse_csv_strings(io.indices);
    if (io.tie_policy == "jitter")
      cfg.tie_policy = TiePolicy::jitter;
    else if (io.tie_policy != "drop")
      throw std::runtime_error("bad --tie-policy '" + io.tie_policy + "'");
    if (io.split == "by-volume-bin")
      cfg.split = SplitMode::by_volume_bin;
    else if (io.split != "by-index")
      throw std::runtime_error("bad --split '" + io.split + "'");
    if (!io.bins.empty()) cfg.volume_edges = parse_csv_doubles(io.bins);

    auto records = parse_trades(io.events_path, cfg);
    if (io.auto_bins > 0) {
      if (!io.bins.empty()) throw std::runtime_error("--bins and --auto-bins are exclusive");
      cfg.volume_edges = auto_volume_edges(records, io.auto_bins);
      std::cerr << "auto bins:";
      for (double e : cfg.volume_edges) std::cerr << " " << fmt(e);
      std::cerr << "\n";
    }
    BuildResult built = build_series(records, cfg);
    out.series = std::move(built.series);
    out.calendar = std::move(built.calendar);
    out.labels = std::move(built.labels);
    out.from_trades = true;
  } else {
    out.series = read_events_csv(io.events_path, io.dims_hint);
  }
  if (!io.calendar_path.empty()) out.calendar = read_calendar_csv(io.calendar_path);
  if (io.horizon_override > 0.0) out.series.horizon = io.horizon_override;
  out.series.validate();
  return out;
}

std::string join_args(const std::vector<std::string>& args) {
  std::string s = "hawkes";
  for (const auto& a : args) {
    s += " ";
    s += a;
  }
  return s;
}

TradingCalendar calendar_or_span(const LoadedInput& in) {
  if (in.calendar) return *in.calendar;
  return TradingCalendar::single(0.0, in.series.horizon);
}

int cmd_simulate(const std::vector<std::string>& args, const std::string& params_path,
                 const std::string& mu_arg, const std::string& alpha_arg,
                 const std::string& beta_arg, const std::string& model,
                 std::uint64_t seed, double horizon, std::size_t max_events,
                 const std::string& calendar_path, const std::string& out_path) {
  SimConfig cfg;
  cfg.seed = seed;
  if (horizon > 0.0) cfg.horizon = horizon;
  if (max_events > 0) cfg.max_events = max_events;

  std::optional<TradingCalendar> cal;
  if (!calendar_path.empty()) cal = read_calendar_csv(calendar_path);

  ModelParams params;
  std::vector<std::string> inputs;
  if (!params_path.empty()) {
    params = read_params_file(params_path);
    inputs.push_back(params_path);
  } else {
    if (mu_arg.empty() || alpha_arg.empty() || beta_arg.empty())
      throw std::runtime_error("simulate needs --params or all of --mu/--alpha/--beta");
    ExpHawkesParams p;
    p.mu = parse_csv_doubles(mu_arg);
    p.alpha = parse_matrix_arg(alpha_arg);
    p.beta = parse_matrix_arg(beta_arg);
    p.validate();
    params = p;
  }
  if (!calendar_path.empty()) inputs.push_back(calendar_path);

  EventSeries series;
  std::string model_name = model;
  if (std::holds_alternative<BowsherParams>(params) || model == "bowsher") {
    if (!std::holds_alternative<BowsherParams>(params))
      throw std::runtime_error("model bowsher requires a bowsher params file");
    if (!cal) throw std::runtime_error("model bowsher requires --calendar");
    series = simulate_bowsher(std::get<BowsherParams>(params), *cal, cfg);
    model_name = "bowsher";
  } else if (model == "daygap" || (model == "hawkes" && cal)) {
    if (!cal) throw std::runtime_error("model daygap requires --calendar");
    series = simulate_daygap(std::get<ExpHawkesParams>(params), *cal, cfg);
    model_name = "daygap";
  } else if (model == "hawkes") {
    series = simulate_hawkes(std::get<ExpHawkesParams>(params), cfg);
  } else {
    throw std::runtime_error("unknown model '" + model + "'");
  }

  write_events_csv(out_path, series);
  std::map<std::string, std::string> settings;
  settings["model"] = model_name;
  if (cfg.horizon) settings["horizon"] = fmt(*cfg.horizon);
  if (cfg.max_events) settings["max_events"] = std::to_string(*cfg.max_events);
  write_run_metadata(out_path, join_args(args), seed, inputs, settings);
  std::cout << "simulated " << series.total_events() << " events in " << series.dims()
            << " dimensions over [0, " << fmt(series.horizon) << "]\n";
  return 0;
}

OptimConfig optim_config_from(double tol_inner, double tol_outer, std::size_t max_inner,
                              std::size_t max_outer, const std::string& inner_method,
                              std::uint64_t seed, bool random_init) {
  OptimConfig cfg;
  cfg.inner_tol = tol_inner;
  cfg.outer_tol = tol_outer;
  cfg.inner_max_iter = max_inner;
  cfg.outer_max_iter = max_outer;
  cfg.seed = seed;
  cfg.random_inner_init = random_init;
  if (inner_method == "agd")
    cfg.inner_method = InnerMethod::accelerated_gradient;
  else if (inner_method != "newton")
    throw std::runtime_error("bad --inner-method '" + inner_method + "', expected newton|agd");
  return cfg;
}

int cmd_fit(const std::vector<std::string>& args, const InputOptions& io,
            const std::string& model, const OptimConfig& cfg, const std::string& out_path) {
  LoadedInput in = load_input(io);
  FitResult result;
  if (model == "bowsher") {
    if (!in.calendar) throw std::runtime_error("model bowsher requires a calendar");
    result = fit_bowsher(in.series, *in.calendar, cfg);
  } else if (model == "daygap") {
    if (!in.calendar) throw std::runtime_error("model daygap requires a calendar");
    result = fit_two_stage(in.series, *in.calendar, cfg);
  } else if (model == "hawkes") {
    result = fit_two_stage(in.series, TradingCalendar::single(0.0, in.series.horizon), cfg);
  } else {
    throw std::runtime_error("unknown model '" + model + "'");
  }

  write_fit_report(out_path, result, model, in.labels);
  std::map<std::string, std::string> settings;
  settings["model"] = model;
  settings["inner_method"] =
      cfg.inner_method == InnerMethod::projected_newton ? "newton" : "agd";
  settings["inner_tol"] = fmt(cfg.inner_tol);
  settings["outer_tol"] = fmt(cfg.outer_tol);
  std::vector<std::string> inputs{io.events_path};
  if (!io.calendar_path.empty()) inputs.push_back(io.calendar_path);
  write_run_metadata(out_path, join_args(args), cfg.seed, inputs, settings);

  std::cout << "fit " << model << ": converged=" << (result.converged ? "true" : "false")
            << " nll=" << fmt(result.nll) << " outer_iterations=" << result.outer_iterations
            << " probes=" << result.inner_trace.size() << "\n";
  if (std::holds_alternative<ExpHawkesParams>(result.params)) {
    const auto& p = std::get<ExpHawkesParams>(result.params);
    std::cout << "mu =";
    for (double v : p.mu) std::cout << " " << fmt(v);
    std::cout << "\n";
  } else {
    const auto& p = std::get<BowsherParams>(result.params);
    std::cout << "mu=" << fmt(p.mu) << " pi=" << fmt(p.pi) << " rho=" << fmt(p.rho)
              << " alpha=" << fmt(p.alpha) << " beta=" << fmt(p.beta) << "\n";
  }
  return 0;
}

int cmd_gof(const std::vector<std::string>& args, const InputOptions& io,
            const std::string& params_path, const std::string& out_path,
            const std::string& qq_path) {
  LoadedInput in = load_input(io);
  const ModelParams params = read_params_file(params_path);

  const TradingCalendar* cal = in.calendar ? &*in.calendar : nullptr;
  const auto rescaled = rescale_times(params, in.series, cal);

  std::ofstream out(out_path);
  if (!out) throw std::runtime_error("cannot write " + out_path);
  out << "dimension,label,events,ks_statistic,p_value,duration_mean,duration_std\n";
  for (std::size_t i = 0; i < rescaled.size(); ++i) {
    std::vector<double> durations;
    durations.reserve(rescaled[i].size());
    double prev = 0.0;
    for (double v : rescaled[i]) {
      durations.push_back(v - prev);
      prev = v;
    }
    const std::string label = i < in.labels.size() ? in.labels[i] : std::to_string(i);
    if (durations.size() < 10) {
      out << i << "," << label << "," << rescaled[i].size()
          << ",unavailable,unavailable,unavailable,unavailable\n";
      continue;
    }
    const KsResult ks = ks_exp1(durations);
    // A well-specified model rescales durations to Exp(1): mean and std near 1.
    double mean = 0.0;
    for (double d : durations) mean += d;
    mean /= static_cast<double>(durations.size());
    double var = 0.0;
    for (double d : durations) var += (d - mean) * (d - mean);
    var /= static_cast<double>(durations.size() - 1);
    out << i << "," << label << "," << rescaled[i].size() << "," << fmt(ks.statistic) << ","
        << fmt(ks.p_value) << "," << fmt(mean) << "," << fmt(std::sqrt(var)) << "\n";
    std::cout << "dim " << i << " (" << label << "): n=" << rescaled[i].size()
              << " ks=" << fmt(ks.statistic) << " p=" << fmt(ks.p_value) << "\n";
  }
  if (!qq_path.empty()) {
    std::ofstream qq(qq_path);
    if (!qq) throw std::runtime_error("cannot write " + qq_path);
    qq << "dimension,theoretical,empirical\n";
    for (std::size_t i = 0; i < rescaled.size(); ++i) {
      std::vector<double> durations;
      double prev = 0.0;
      for (double v : rescaled[i]) {
        durations.push_back(v - prev);
        prev = v;
      }
      for (const auto& pt : qq_points(durations))
        qq << i << "," << fmt(pt.theoretical) << "," << fmt(pt.empirical) << "\n";
    }
  }
  std::vector<std::string> inputs{io.events_path, params_path};
  if (!io.calendar_path.empty()) inputs.push_back(io.calendar_path);
  write_run_metadata(out_path, join_args(args), 0, inputs, {});
  return 0;
}

int cmd_landscape(const std::vector<std::string>& args, const InputOptions& io,
                  const std::string& params_path, const std::string& coord_a,
                  const std::string& coord_b, double min_a, double max_a, std::size_t steps_a,
                  double min_b, double max_b, std::size_t steps_b, bool log_spacing,
                  const std::string& out_path) {
  LoadedInput in = load_input(io);
  ModelParams mp = read_params_file(params_path);
  if (!std::holds_alternative<ExpHawkesParams>(mp))
    throw std::runtime_error("landscape needs multivariate exponential-kernel params");
  ExpHawkesParams params = std::get<ExpHawkesParams>(mp);
  const auto [ra, ca] = parse_coord(coord_a);
  const auto [rb, cb] = parse_coord(coord_b);
  if (ra >= params.dims() || ca >= params.dims() || rb >= params.dims() || cb >= params.dims())
    throw std::runtime_error("coordinate out of range");
  if (steps_a == 0 || steps_b == 0) throw std::runtime_error("steps must be positive");
  if (!(min_a > 0.0) || !(min_b > 0.0)) throw std::runtime_error("decay grid must be positive");

  const TradingCalendar cal = calendar_or_span(in);
  auto grid_value = [&](double lo, double hi, std::size_t steps, std::size_t k) {
    if (steps == 1) return lo;
    const double f = static_cast<double>(k) / static_cast<double>(steps - 1);
    if (log_spacing) return lo * std::pow(hi / lo, f);
    return lo + f * (hi - lo);
  };

  std::ofstream out(out_path);
  if (!out) throw std::runtime_error("cannot write " + out_path);
  out << "beta_a,beta_b,nll\n";
  double best = std::numeric_limits<double>::infinity();
  double best_a = min_a, best_b = min_b;
  for (std::size_t i = 0; i < steps_a; ++i) {
    const double va = grid_value(min_a, max_a, steps_a, i);
    for (std::size_t j = 0; j < steps_b; ++j) {
      const double vb = grid_value(min_b, max_b, steps_b, j);
      params.beta(ra, ca) = va;
      params.beta(rb, cb) = vb;
      double v;
      try {
        v = nll_daygap(params, in.series, cal);
      } catch (const InfeasibleLikelihood&) {
        v = std::numeric_limits<double>::infinity();
      }
      out << fmt(va) << "," << fmt(vb) << "," << fmt_full(v) << "\n";
      if (v < best) {
        best = v;
        best_a = va;
        best_b = vb;
      }
    }
  }
  std::cout << "grid minimum nll=" << fmt(best) << " at beta_a=" << fmt(best_a)
            << " beta_b=" << fmt(best_b) << "\n";
  std::vector<std::string> inputs{io.events_path, params_path};
  if (!io.calendar_path.empty()) inputs.push_back(io.calendar_path);
  write_run_metadata(out_path, join_args(args), 0, inputs, {});
  return 0;
}

int cmd_stats(const std::vector<std::string>& args, const InputOptions& io,
              const std::string& out_path) {
  LoadedInput in = load_input(io);
  std::ofstream out(out_path);
  if (!out) throw std::runtime_error("cannot write " + out_path);
  out << "dimension,label,events,mean_minutes,std_minutes,q1_minutes,median_minutes,"
         "q3_minutes\n";
  for (std::size_t i = 0; i < in.series.dims(); ++i) {
    const std::string label = i < in.labels.size() ? in.labels[i] : std::to_string(i);
    if (in.series.times[i].size() < 2) {
      out << i << "," << label << "," << in.series.times[i].size()
          << ",unavailable,unavailable,unavailable,unavailable,unavailable\n";
      continue;
    }
    const InterarrivalStats st = interarrival_stats(in.series, i);
    out << i << "," << label << "," << st.count << "," << fmt(st.mean / 60.0) << ","
        << fmt(st.std_dev / 60.0) << "," << fmt(st.q1 / 60.0) << "," << fmt(st.median / 60.0)
        << "," << fmt(st.q3 / 60.0) << "\n";
    std::cout << "dim " << i << " (" << label << "): n=" << st.count
              << " mean=" << fmt(st.mean / 60.0) << "m median=" << fmt(st.median / 60.0)
              << "m\n";
  }
  std::vector<std::string> inputs{io.events_path};
  if (!io.calendar_path.empty()) inputs.push_back(io.calendar_path);
  write_run_metadata(out_path, join_args(args), 0, inputs, {});
  return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args) {
  CLI::App app{"exponential-kernel point-process toolkit"};
  app.require_subcommand(1);

  // simulate
  auto* sim = app.add_subcommand("simulate", "draw a sample path");
  std::string sim_params, sim_mu, sim_alpha, sim_beta, sim_model = "hawkes";
  std::string sim_calendar, sim_out;
  std::uint64_t sim_seed = 0;
  double sim_horizon = 0.0;
  std::size_t sim_max_events = 0;
  sim->add_option("--params", sim_params, "params file");
  sim->add_option("--mu", sim_mu, "comma-separated baselines");
  sim->add_option("--alpha", sim_alpha, "branching matrix rows 'a,b;c,d'");
  sim->add_option("--beta", sim_beta, "decay matrix rows 'a,b;c,d'");
  sim->add_option("--model", sim_model, "hawkes|daygap|bowsher");
  sim->add_option("--seed", sim_seed, "RNG seed");
  sim->add_option("--horizon", sim_horizon, "simulate on [0, horizon] seconds");
  sim->add_option("--max-events", sim_max_events, "stop after N accepted events");
  sim->add_option("--calendar", sim_calendar, "trading calendar CSV");
  sim->add_option("--out", sim_out, "output events CSV")->required();

  // fit
  auto* fit = app.add_subcommand("fit", "maximum-likelihood fit");
  InputOptions fit_io;
  add_input_options(fit, fit_io);
  std::string fit_model = "hawkes", fit_method = "newton", fit_out;
  double fit_tol_inner = 1e-8, fit_tol_outer = 1e-4;
  std::size_t fit_max_inner = 500, fit_max_outer = 0;
  std::uint64_t fit_seed = 0;
  bool fit_random_init = false;
  fit->add_option("--model", fit_model, "hawkes|daygap|bowsher")->required();
  fit->add_option("--inner-method", fit_method, "newton|agd");
  fit->add_option("--tol-inner", fit_tol_inner, "inner relative tolerance");
  fit->add_option("--tol-outer", fit_tol_outer, "outer simplex tolerance");
  fit->add_option("--max-inner", fit_max_inner, "inner iteration cap");
  fit->add_option("--max-outer", fit_max_outer, "outer iteration cap (0 = 200 per variable)");
  fit->add_option("--seed", fit_seed, "seed for randomized inner starts");
  fit->add_flag("--random-inner-init", fit_random_init,
                "random inner start at every probe instead of warm starts");
  fit->add_option("--out", fit_out, "fit report path")->required();

  // gof
  auto* gof = app.add_subcommand("gof", "time-rescaling goodness of fit");
  InputOptions gof_io;
  add_input_options(gof, gof_io);
  std::string gof_params, gof_out, gof_qq;
  gof->add_option("--params", gof_params, "fitted params file")->required();
  gof->add_option("--out", gof_out, "report CSV path")->required();
  gof->add_option("--qq-out", gof_qq, "optional Q-Q data CSV");

  // landscape
  auto* land = app.add_subcommand("landscape", "NLL over a 2-D decay grid");
  InputOptions land_io;
  add_input_options(land, land_io);
  std::string land_params, land_a, land_b, land_out;
  double land_min_a = 0.0, land_max_a = 0.0, land_min_b = 0.0, land_max_b = 0.0;
  std::size_t land_steps_a = 1, land_steps_b = 1;
  bool land_log = false;
  land->add_option("--params", land_params, "fixed params file")->required();
  land->add_option("--coord-a", land_a, "first decay coordinate row,col")->required();
  land->add_option("--coord-b", land_b, "second decay coordinate row,col")->required();
  land->add_option("--min-a", land_min_a)->required();
  land->add_option("--max-a", land_max_a)->required();
  land->add_option("--steps-a", land_steps_a)->required();
  land->add_option("--min-b", land_min_b)->required();
  land->add_option("--max-b", land_max_b)->required();
  land->add_option("--steps-b", land_steps_b)->required();
  land->add_flag("--log", land_log, "log-spaced grid");
  land->add_option("--out", land_out, "grid CSV path")->required();

  // stats
  auto* stats = app.add_subcommand("stats", "per-dimension inter-arrival summary");
  InputOptions stats_io;
  add_input_options(stats, stats_io);
  std::string stats_out;
  stats->add_option("--out", stats_out, "summary CSV path")->required();

  std::vector<char*> argv;
  std::vector<std::string> storage;
  storage.reserve(args.size() + 1);
  storage.push_back("hawkes");
  for (const auto& a : args) storage.push_back(a);
  argv.reserve(storage.size());
  for (auto& s : storage) argv.push_back(s.data());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (sim->parsed())
      return cmd_simulate(args, sim_params, sim_mu, sim_alpha, sim_beta, sim_model, sim_seed,
                          sim_horizon, sim_max_events, sim_calendar, sim_out);
    if (fit->parsed()) {
      const OptimConfig cfg =
          optim_config_from(fit_tol_inner, fit_tol_outer, fit_max_inner, fit_max_outer,
                            fit_method, fit_seed, fit_random_init);
      return cmd_fit(args, fit_io, fit_model, cfg, fit_out);
    }
    if (gof->parsed()) return cmd_gof(args, gof_io, gof_params, gof_out, gof_qq);
    if (land->parsed())
      return cmd_landscape(args, land_io, land_params, land_a, land_b, land_min_a, land_max_a,
                           land_steps_a, land_min_b, land_max_b, land_steps_b, land_log,
                           land_out);
    if (stats->parsed()) return cmd_stats(args, stats_io, stats_out);
    std::cerr << "no subcommand given\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

int run_cli(int argc, char** argv) {
  std::vector<std::string> args;
  args.reserve(argc > 0 ? static_cast<std::size_t>(argc - 1) : 0);
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run_cli(args);
}

}  // namespace hawkes
