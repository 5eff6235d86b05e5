#pragma once
// Publication-style tables: coefficient table, comparison matrices and a
// plain-language summary.

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "pctcoef/bootstrap.hpp"
#include "pctcoef/dataset.hpp"

namespace pctcoef {

struct ReportRow {
  enum class Type { coefficient, reference };
  Type type = Type::coefficient;
  std::string label;
  std::size_t iv = 0;  ///< index into FitResult::coefficients; unused for reference rows
  std::string variable;  ///< source variable (nominal variable for dummies)
};

/// Table order:
///  1. numeric and binary IVs first, then one batch per nominal variable;
///  2. a missing-data indicator sits directly after its source variable;
///  3. each nominal variable's dummies stay together;
///  4. the nominal reference group appears as a labeled row heading its batch;
///  5. inside a batch, rows run from largest to smallest |b_p| (ties keep
///     declaration order), except pinned indicators.
std::vector<ReportRow> order_rows(const FitResult& fit, const std::vector<IvTag>& tags,
                                  const std::vector<NominalExpansion>& nominals = {});

struct GroupPair {
  std::string first;
  std::string second;
  double gap = 0.0;  ///< b_p(first) - b_p(second)
};

struct NominalSummary {
  std::string variable;
  std::string reference;
  std::vector<GroupPair> pairs;  ///< all (G^2 - G)/2 pairs
  GroupPair largest_pair;        ///< largest |gap|; first in enumeration order on ties
  double mean_abs_pairwise = 0.0;
  std::size_t pair_count = 0;
};

/// Group effects on the percentage scale, reference group at 0. `groups`
/// and `b_p` are parallel. Pairs are enumerated as (groups[b], groups[a])
/// for a < b.
NominalSummary nominal_pairwise(const std::string& variable, const std::string& reference,
                                const std::vector<std::string>& groups, const std::vector<double>& b_p);

/// Same, reading the group coefficients from a fit.
NominalSummary nominal_pairwise(const FitResult& fit, const NominalExpansion& nominal);

struct RatioNote {
  enum class Type { differential, proportional, multiple };
  Type type = Type::differential;
  std::string first;
  std::string second;
  double value = 0.0;
};

/// For each pair: differential |a| - |b|, proportional (|a| - |b|) / |b|,
/// and multiple |a| / |b|. Proportional notes with a zero denominator are
/// skipped and reported through `warnings`.
std::vector<RatioNote> ratio_notes(const FitResult& fit,
                                   const std::vector<std::pair<std::string, std::string>>& pairs,
                                   std::vector<std::string>* warnings = nullptr);

struct ReportBundle {
  std::string dv_name;
  double dv_percent_mean = 0.0;  ///< mean of the percentized DV
  FitResult fit;
  std::vector<ReportRow> rows;
  std::map<std::string, BootstrapDistribution> inference;
  BootstrapConfig bootstrap;
  std::size_t redraws = 0;
  ComparisonMatrix scalar_matrix;
  ComparisonMatrix directional_matrix;
  std::vector<NominalSummary> nominal_summaries;
  std::vector<RatioNote> ratio_notes;
  MissingReport missing;
  std::vector<std::string> warnings;
};

/// Runs inference on a fitted design and assembles every table.
ReportBundle assemble_report(const DesignMatrix& dm, const FitResult& fit, const ReplicateSet& reps,
                             const BootstrapConfig& cfg, MissingReport missing = {});

/// Coefficient in table style: three decimals, no leading zero (".034",
/// "-.008").
std::string format_coefficient(double value);
/// Three decimals with leading zero ("-0.105").
std::string format_fixed3(double value);
std::string stars_text(int stars);

std::string render_coefficients_md(const ReportBundle& b);
std::string render_coefficients_csv(const ReportBundle& b);
std::string render_matrix_md(const ReportBundle& b, const ComparisonMatrix& m);
std::string render_matrix_csv(const ComparisonMatrix& m);
std::string render_summary_md(const ReportBundle& b);

struct RenderFormats {
  bool markdown = true;
  bool csv = true;
};

/// Writes the report files into `out_dir` (created if needed) and returns
/// the paths written. summary.md is always written.
std::vector<std::filesystem::path> render(const ReportBundle& bundle,
                                          const std::filesystem::path& out_dir,
                                          const RenderFormats& formats = {});

}  // namespace pctcoef
