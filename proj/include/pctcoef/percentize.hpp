#pragma once
// Percentage-scale transforms and design-matrix construction.
//
// A percentage scale maps the conceptual minimum of a variable to 0 and its
// conceptual maximum to 1. Observed values beyond the conceptual anchors map
// outside [0, 1] (a 110-year-old on a 0-100 age scale scores 1.1).

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pctcoef/dataset.hpp"

namespace pctcoef {

/// (value - c_n) / (c_x - c_n). Throws Error(schema) unless c_x > c_n.
double percentize_value(double value, double conceptual_min, double conceptual_max);

/// 0-100 percent scale: 100 * (value - m_n) / (m_x - m_n).
double percent_value_100(double value, double measure_min, double measure_max);

/// General min-max normalization from [min_o, max_o] onto [min_n, max_n].
/// (min_n, max_n) = (0, 1) gives percentize_value; (0, 100) gives
/// percent_value_100.
double minmax_value(double value, double min_o, double max_o, double min_n, double max_n);

struct PercentizedColumn {
  std::string name;
  std::vector<double> values;  ///< fractions of the conceptual scale
  VariableSpec source_spec;
  /// Anchors used for this column: the spec's anchors for numeric and
  /// ordinal variables, (0, 1) for binaries and dummies.
  double conceptual_min = 0.0;
  double conceptual_max = 1.0;
  double observed_min = 0.0;
  double observed_max = 0.0;

  double conceptual_range() const noexcept { return conceptual_max - conceptual_min; }
};

enum class Batch { numeric_binary, nominal };

/// Where an IV column came from; drives table ordering.
struct IvTag {
  Batch batch = Batch::numeric_binary;
  std::string variable;                   ///< source variable name
  std::optional<std::string> group;       ///< nominal: category represented by the dummy
  std::optional<std::string> indicator_for;  ///< missing-data indicator: its source variable
};

struct NominalExpansion {
  std::string variable;
  std::string reference;
  std::vector<std::string> groups;  ///< every observed category, sorted
  std::vector<PercentizedColumn> dummies;
  std::vector<double> group_dv_means;  ///< parallel to `groups`
};

/// Expands a nominal column into G-1 dummies (1 = member), omitting the
/// reference group chosen by spec.reference_rule. DV-mean ties resolve to
/// the lexicographically smallest label. Dummies are named
/// `<variable>_<group>` and ordered by label.
NominalExpansion expand_nominal(std::span<const std::string> column, std::span<const double> dv,
                                const VariableSpec& spec);

struct DesignMatrix {
  PercentizedColumn dv;
  std::vector<PercentizedColumn> ivs;
  std::vector<double> raw_dv;
  std::vector<std::vector<double>> raw_ivs;
  std::vector<IvTag> tags;
  std::vector<NominalExpansion> nominals;
  std::vector<std::string> warnings;

  std::size_t n_rows() const noexcept { return raw_dv.size(); }
  std::size_t n_ivs() const noexcept { return ivs.size(); }
  /// Index of the IV column with this name; throws Error(schema) if absent.
  std::size_t iv_index(std::string_view name) const;
};

struct DesignOptions {
  /// Reject observed values outside the conceptual anchors instead of warning.
  bool strict_anchors = false;
};

/// Percentizes every variable of a dataset whose missing values have been
/// resolved. IV order follows column order, with each nominal variable's
/// dummies in place of the variable.
DesignMatrix build_design_matrix(const Dataset& d, const DesignOptions& options = {});

}  // namespace pctcoef
