#include "pctcoef/pipeline.hpp"

#include <fmt/format.h>

#include <cstdlib>
#include <json.hpp>
#include <ostream>
#include <thread>

#include "pctcoef/error.hpp"
#include "pctcoef/kernels.hpp"

namespace pctcoef {

using nlohmann::json;

unsigned resolve_threads(std::optional<unsigned> requested) {
  if (requested && *requested > 0) return *requested;
  if (const char* env = std::getenv("PCTCOEF_THREADS")) {
    char* end = nullptr;
    const unsigned long v = std::strtoul(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<unsigned>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

namespace {

void emit(std::ostream& log, json event) { log << event.dump() << '\n'; }

}  // namespace

RunResult run_pipeline(const RunConfig& cfg, unsigned threads, std::ostream& log) {
  cfg.validate();
  emit(log, {{"event", "start"},
             {"data", cfg.data_path.string()},
             {"n_bootstrap", cfg.bootstrap.n_bootstrap},
             {"seed", cfg.bootstrap.seed},
             {"ci_level", cfg.bootstrap.ci_level},
             {"threads", threads},
             {"kernels", std::string(kernels::name(kernels::active().backend))}});

  const Dataset raw = load_csv(cfg.data_path, cfg.variables);
  auto [data, missing] = apply_missing_policy(raw);
  for (const MissingResolution& m : missing.variables) {
    json e{{"event", "missing"},
           {"variable", m.variable},
           {"missing", m.missing_count},
           {"policy", std::string(to_string(m.policy))}};
    if (m.indicator) {
      e["indicator"] = *m.indicator;
      e["fill_value"] = *m.fill_value;
    } else if (m.absorbed_into) {
      e["absorbed_into"] = *m.absorbed_into;
    } else {
      e["rows_dropped"] = m.rows_dropped;
    }
    emit(log, std::move(e));
  }
  emit(log, {{"event", "rows"}, {"before", missing.rows_before}, {"after", missing.rows_after}});

  const DesignMatrix dm = build_design_matrix(data, DesignOptions{cfg.strict_anchors});
  for (const NominalExpansion& n : dm.nominals)
    emit(log, {{"event", "reference_group"},
               {"variable", n.variable},
               {"reference", n.reference},
               {"groups", n.groups},
               {"group_dv_means", n.group_dv_means}});
  for (const std::string& w : dm.warnings) emit(log, {{"event", "warning"}, {"message", w}});

  const FitResult fit = fit_three_ways(dm);
  for (const std::string& w : fit.warnings) emit(log, {{"event", "warning"}, {"message", w}});

  const ReplicateSet reps = bootstrap_fits(dm, cfg.bootstrap, threads);
  emit(log, {{"event", "bootstrap"}, {"replicates", reps.size()}, {"redraws", reps.redraws}});

  RunResult result;
  result.bundle = assemble_report(dm, fit, reps, cfg.bootstrap, std::move(missing));
  result.files = render(result.bundle, cfg.output_dir, cfg.output_formats);
  json files = json::array();
  for (const auto& f : result.files) files.push_back(f.string());
  emit(log, {{"event", "done"}, {"files", files}});
  return result;
}

int run(const RunOptions& options, std::ostream& log) {
  try {
    RunConfig cfg = load_run_config(options.config_path);
    if (options.data) cfg.data_path = *options.data;
    if (options.out) cfg.output_dir = *options.out;
    if (options.n_bootstrap) cfg.bootstrap.n_bootstrap = *options.n_bootstrap;
    if (options.seed) cfg.bootstrap.seed = *options.seed;
    if (options.ci_level) cfg.bootstrap.ci_level = *options.ci_level;
    if (options.formats) cfg.output_formats = parse_formats(*options.formats);
    if (options.strict_anchors) cfg.strict_anchors = true;
    if (cfg.data_path.empty()) throw Error(ErrorKind::schema, "no data file given (config 'data' or --data)");
    run_pipeline(cfg, resolve_threads(options.threads), log);
    return 0;
  } catch (const Error& e) {
    emit(log, {{"event", "error"}, {"kind", to_string(e.kind())}, {"message", e.what()}});
    return exit_code(e.kind());
  }
}

}  // namespace pctcoef
