#pragma once

// File formats for the command-line tool. Parameter and fit-report files are
// flat key = value text with matrix rows spelled `name.rowK = v0 v1 ...`;
// event and calendar files are small CSVs. Every write is full precision.

#include <cstdint>
#include <map>
#include <string>
#include <variant>
#include <vector>

#include "hawkes/types.hpp"

namespace hawkes {

using ModelParams = std::variant<ExpHawkesParams, BowsherParams>;

// Reads a params file. Multivariate files need mu and alpha/beta rows;
// a `model = bowsher` file needs scalar mu, pi, rho, alpha, beta.
ModelParams read_params_file(const std::string& path);

void write_params_file(const std::string& path, const ModelParams& params);

// Events CSV: `# dims=M`, `# horizon=T` comment lines, then a
// timestamp_seconds,dimension header and one row per event in time order.
void write_events_csv(const std::string& path, const EventSeries& series);
EventSeries read_events_csv(const std::string& path, std::size_t dims_hint = 0);

// Calendar CSV: open_seconds,close_seconds header plus one row per session.
void write_calendar_csv(const std::string& path, const TradingCalendar& calendar);
TradingCalendar read_calendar_csv(const std::string& path);

// Fit report: model, convergence, NLL, raw parameters, the branching matrix,
// and human-readable columns (1/mu and 1/beta in minutes), then the probe
// trace. labels, when non-empty, name the dimensions.
void write_fit_report(const std::string& path, const FitResult& result,
                      const std::string& model_name,
                      const std::vector<std::string>& labels = {});

// FNV-1a 64-bit hash of a file's bytes, for run metadata.
std::uint64_t fnv1a64_file(const std::string& path);

// Sidecar `<out>.meta.json`: tool version, command line, seed, RNG
// identifier, input-file hashes, extra settings.
void write_run_metadata(const std::string& out_path, const std::string& command_line,
                        std::uint64_t seed,
                        const std::vector<std::string>& input_paths,
                        const std::map<std::string, std::string>& settings);

inline constexpr const char* kToolVersion = "0.1.0";

}  // namespace hawkes
