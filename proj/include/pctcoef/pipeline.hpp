#pragma once
// End-to-end batch run: config -> data -> percentize -> fit -> bootstrap ->
// report files.

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "pctcoef/config.hpp"

namespace pctcoef {

/// Command-line overrides; unset fields keep the config's values.
struct RunOptions {
  std::filesystem::path config_path;
  std::optional<std::filesystem::path> data;
  std::optional<std::filesystem::path> out;
  std::optional<std::size_t> n_bootstrap;
  std::optional<std::uint64_t> seed;
  std::optional<double> ci_level;
  std::optional<std::string> formats;
  bool strict_anchors = false;
  std::optional<unsigned> threads;
};

/// --threads, then PCTCOEF_THREADS, then hardware concurrency.
unsigned resolve_threads(std::optional<unsigned> requested);

struct RunResult {
  ReportBundle bundle;
  std::vector<std::filesystem::path> files;
};

/// Runs the pipeline, writing one JSON object per line to `log` for every
/// decision that affects the numbers. Throws pctcoef::Error.
RunResult run_pipeline(const RunConfig& cfg, unsigned threads, std::ostream& log);

/// Applies overrides, runs, and maps failures to exit codes (0 ok, 1
/// schema/config, 2 data or I/O, 3 numeric).
int run(const RunOptions& options, std::ostream& log);

}  // namespace pctcoef
