#include "pctcoef/percentize.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <map>

#include "pctcoef/error.hpp"

namespace pctcoef {

namespace {

void require_anchors(double lo, double hi, const char* what) {
  if (!(hi > lo) || !std::isfinite(lo) || !std::isfinite(hi))
    throw Error(ErrorKind::schema,
                fmt::format("{}: upper anchor ({}) must exceed lower anchor ({})", what, hi, lo));
}

}  // namespace

double percentize_value(double value, double conceptual_min, double conceptual_max) {
  require_anchors(conceptual_min, conceptual_max, "percentize");
  return (value - conceptual_min) / (conceptual_max - conceptual_min);
}

double percent_value_100(double value, double measure_min, double measure_max) {
  require_anchors(measure_min, measure_max, "percent scale");
  return (value - measure_min) / (measure_max - measure_min) * 100.0;
}

double minmax_value(double value, double min_o, double max_o, double min_n, double max_n) {
  require_anchors(min_o, max_o, "min-max source range");
  if (!(max_n >= min_n))
    throw Error(ErrorKind::schema,
                fmt::format("min-max target range: max ({}) below min ({})", max_n, min_n));
  return (value - min_o) / (max_o - min_o) * (max_n - min_n) + min_n;
}

// ---- nominal expansion -----------------------------------------------------

NominalExpansion expand_nominal(std::span<const std::string> column, std::span<const double> dv,
                                const VariableSpec& spec) {
  if (column.size() != dv.size())
    throw Error(ErrorKind::data, fmt::format("variable '{}': {} labels but {} DV values", spec.name,
                                             column.size(), dv.size()));

  // std::map keeps groups in label order, which is also the tie-break order.
  std::map<std::string, std::pair<double, std::size_t>> stats;
  for (std::size_t r = 0; r < column.size(); ++r) {
    auto& [total, count] = stats[column[r]];
    total += dv[r];
    ++count;
  }
  if (stats.size() < 2)
    throw Error(ErrorKind::numeric,
                fmt::format("variable '{}' is degenerate: {} distinct categor{} (need at least 2)",
                            spec.name, stats.size(), stats.size() == 1 ? "y" : "ies"));

  NominalExpansion out;
  out.variable = spec.name;
  for (const auto& [label, s] : stats) {
    out.groups.push_back(label);
    out.group_dv_means.push_back(s.first / static_cast<double>(s.second));
  }

  switch (spec.reference_rule) {
    case ReferenceRule::explicit_group: {
      if (!spec.reference_group || !stats.contains(*spec.reference_group))
        throw Error(ErrorKind::schema,
                    fmt::format("variable '{}': reference group '{}' is not an observed category",
                                spec.name, spec.reference_group.value_or("")));
      out.reference = *spec.reference_group;
      break;
    }
    case ReferenceRule::highest_dv_mean:
    case ReferenceRule::lowest_dv_mean: {
      const bool highest = spec.reference_rule == ReferenceRule::highest_dv_mean;
      std::size_t best = 0;
      for (std::size_t g = 1; g < out.groups.size(); ++g) {
        const double m = out.group_dv_means[g];
        // strict comparison: the first (smallest) label keeps a tie
        if (highest ? m > out.group_dv_means[best] : m < out.group_dv_means[best]) best = g;
      }
      out.reference = out.groups[best];
      break;
    }
  }

  for (const std::string& group : out.groups) {
    if (group == out.reference) continue;
    PercentizedColumn dummy;
    dummy.name = fmt::format("{}_{}", spec.name, group);
    dummy.source_spec = spec;
    dummy.conceptual_min = 0.0;
    dummy.conceptual_max = 1.0;
    dummy.values.reserve(column.size());
    for (const std::string& label : column) dummy.values.push_back(label == group ? 1.0 : 0.0);
    dummy.observed_min = *std::min_element(dummy.values.begin(), dummy.values.end());
    dummy.observed_max = *std::max_element(dummy.values.begin(), dummy.values.end());
    out.dummies.push_back(std::move(dummy));
  }
  return out;
}

// ---- design matrix ---------------------------------------------------------

std::size_t DesignMatrix::iv_index(std::string_view name) const {
  for (std::size_t i = 0; i < ivs.size(); ++i)
    if (ivs[i].name == name) return i;
  throw Error(ErrorKind::schema, fmt::format("no independent variable named '{}'", name));
}

namespace {

std::vector<double> observed_values(const Column& c) {
  std::vector<double> out;
  out.reserve(c.numbers.size());
  for (std::size_t r = 0; r < c.numbers.size(); ++r) {
    if (!c.numbers[r])
      throw Error(ErrorKind::data,
                  fmt::format("variable '{}' still has missing values; apply the missing policy first",
                              c.spec.name));
    out.push_back(*c.numbers[r]);
  }
  return out;
}

PercentizedColumn percentize_column(const Column& c, std::span<const double> raw,
                                    const DesignOptions& options,
                                    std::vector<std::string>& warnings) {
  PercentizedColumn pc;
  pc.name = c.spec.name;
  pc.source_spec = c.spec;
  if (c.spec.kind == Kind::binary) {
    for (std::size_t r = 0; r < raw.size(); ++r)
      if (raw[r] != 0.0 && raw[r] != 1.0)
        throw Error(ErrorKind::data,
                    fmt::format("binary variable '{}' has value {} in data row {}; expected 0 or 1",
                                c.spec.name, raw[r], r + 1));
    pc.values.assign(raw.begin(), raw.end());
  } else {
    pc.conceptual_min = c.spec.conceptual_min;
    pc.conceptual_max = c.spec.conceptual_max;
    std::size_t outside = 0;
    pc.values.reserve(raw.size());
    for (double v : raw) {
      if (v < pc.conceptual_min || v > pc.conceptual_max) ++outside;
      pc.values.push_back(percentize_value(v, pc.conceptual_min, pc.conceptual_max));
    }
    if (outside > 0) {
      const std::string msg =
          fmt::format("variable '{}': {} value(s) fall outside the conceptual anchors [{}, {}]",
                      c.spec.name, outside, pc.conceptual_min, pc.conceptual_max);
      if (options.strict_anchors) throw Error(ErrorKind::data, msg);
      warnings.push_back(msg);
    }
  }
  if (!pc.values.empty()) {
    const auto [lo, hi] = std::minmax_element(pc.values.begin(), pc.values.end());
    pc.observed_min = *lo;
    pc.observed_max = *hi;
  }
  return pc;
}

}  // namespace

DesignMatrix build_design_matrix(const Dataset& d, const DesignOptions& options) {
  DesignMatrix dm;

  const Column* dv_col = nullptr;
  for (const Column& c : d.columns()) {
    if (c.spec.role != Role::dependent) continue;
    if (dv_col)
      throw Error(ErrorKind::schema, fmt::format("two dependent variables: '{}' and '{}'",
                                                 dv_col->spec.name, c.spec.name));
    dv_col = &c;
  }
  if (!dv_col) throw Error(ErrorKind::schema, "no dependent variable declared");
  if (dv_col->spec.is_nominal())
    throw Error(ErrorKind::schema, "the dependent variable must be numeric, ordinal or binary");

  dm.raw_dv = observed_values(*dv_col);
  dm.dv = percentize_column(*dv_col, dm.raw_dv, options, dm.warnings);

  for (const Column& c : d.columns()) {
    if (c.spec.role == Role::dependent) continue;
    if (c.spec.is_nominal()) {
      std::vector<std::string> labels;
      labels.reserve(c.labels.size());
      for (std::size_t r = 0; r < c.labels.size(); ++r) {
        if (!c.labels[r])
          throw Error(ErrorKind::data,
                      fmt::format("variable '{}' still has missing values; apply the missing policy first",
                                  c.spec.name));
        labels.push_back(*c.labels[r]);
      }
      NominalExpansion ex = expand_nominal(labels, dm.raw_dv, c.spec);
      for (PercentizedColumn& dummy : ex.dummies) {
        const std::string group = dummy.name.substr(c.spec.name.size() + 1);
        dm.raw_ivs.push_back(dummy.values);
        dm.tags.push_back(IvTag{Batch::nominal, c.spec.name, group, std::nullopt});
        dm.ivs.push_back(dummy);
      }
      dm.nominals.push_back(std::move(ex));
      continue;
    }
    std::vector<double> raw = observed_values(c);
    const auto [lo, hi] = std::minmax_element(raw.begin(), raw.end());
    if (raw.empty() || *lo == *hi)
      throw Error(ErrorKind::numeric,
                  fmt::format("variable '{}' is degenerate: it has no variance", c.spec.name));
    dm.ivs.push_back(percentize_column(c, raw, options, dm.warnings));
    dm.tags.push_back(IvTag{Batch::numeric_binary, c.spec.name, std::nullopt, c.indicator_for});
    dm.raw_ivs.push_back(std::move(raw));
  }
  if (dm.ivs.empty()) throw Error(ErrorKind::schema, "no independent variables declared");

  for (std::size_t i = 0; i < dm.ivs.size(); ++i)
    for (std::size_t j = i + 1; j < dm.ivs.size(); ++j)
      if (dm.ivs[i].values == dm.ivs[j].values)
        throw Error(ErrorKind::numeric, fmt::format("independent variables '{}' and '{}' are identical",
                                                    dm.ivs[i].name, dm.ivs[j].name));
  return dm;
}

}  // namespace pctcoef
