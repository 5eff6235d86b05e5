#pragma once
// Run configuration: one JSON document describing data, variables,
// bootstrap settings and outputs.

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pctcoef/bootstrap.hpp"
#include "pctcoef/dataset.hpp"
#include "pctcoef/report.hpp"

namespace pctcoef {

struct RunConfig {
  std::filesystem::path data_path;
  std::vector<VariableSpec> variables;
  BootstrapConfig bootstrap;
  std::filesystem::path output_dir = "out";
  RenderFormats output_formats;
  bool strict_anchors = false;

  /// Exactly one dependent variable, at least one independent, unique
  /// names, every spec valid. Throws Error(schema).
  void validate() const;
};

/// Parses a config document. Relative `data` and `output_dir` paths resolve
/// against `base_dir`.
RunConfig parse_run_config(std::string_view json_text, const std::filesystem::path& base_dir = {});

RunConfig load_run_config(const std::filesystem::path& path);

/// "md,csv" style list.
RenderFormats parse_formats(std::string_view list);

}  // namespace pctcoef
