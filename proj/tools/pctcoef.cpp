// pctcoef: percentage coefficients with bootstrap inference, batch CLI.

#include <CLI11.hpp>
#include <iostream>

#include "pctcoef/pipeline.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Percentage, raw and standardized regression coefficients with percentile-bootstrap "
               "comparisons"};
  pctcoef::RunOptions opt;
  std::string config;
  app.add_option("--config", config, "JSON run configuration")->required();

  std::string data, out, formats;
  std::size_t n_bootstrap = 0;
  std::uint64_t seed = 0;
  double ci = 0.0;
  unsigned threads = 0;
  auto* o_data = app.add_option("--data", data, "CSV data file (overrides config)");
  auto* o_out = app.add_option("--out", out, "output directory (overrides config)");
  auto* o_boot = app.add_option("--bootstrap", n_bootstrap, "bootstrap replicates")->check(CLI::PositiveNumber);
  auto* o_seed = app.add_option("--seed", seed, "RNG seed");
  auto* o_ci = app.add_option("--ci", ci, "confidence level, e.g. 0.95")->check(CLI::Range(0.0, 1.0));
  auto* o_fmt = app.add_option("--format", formats, "comma-separated output formats: md,csv");
  app.add_flag("--strict-anchors", opt.strict_anchors, "reject values outside conceptual anchors");
  auto* o_threads = app.add_option("--threads", threads, "worker threads (default: PCTCOEF_THREADS or all cores)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  opt.config_path = config;
  if (*o_data) opt.data = data;
  if (*o_out) opt.out = out;
  if (*o_boot) opt.n_bootstrap = n_bootstrap;
  if (*o_seed) opt.seed = seed;
  if (*o_ci) opt.ci_level = ci;
  if (*o_fmt) opt.formats = formats;
  if (*o_threads) opt.threads = threads;
  return pctcoef::run(opt, std::cerr);
}
