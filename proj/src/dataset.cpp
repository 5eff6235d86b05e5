#include "pctcoef/dataset.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <unordered_map>

#include "pctcoef/csv.hpp"
#include "pctcoef/error.hpp"

namespace pctcoef {

// ---- enum names ------------------------------------------------------------

std::string_view to_string(Role r) noexcept {
  switch (r) {
    case Role::dependent: return "dependent";
    case Role::independent: return "independent";
    case Role::control: return "control";
  }
  return "?";
}

std::string_view to_string(Kind k) noexcept {
  switch (k) {
    case Kind::numeric: return "numeric";
    case Kind::binary: return "binary";
    case Kind::ordinal: return "ordinal";
    case Kind::nominal: return "nominal";
  }
  return "?";
}

std::string_view to_string(MissingPolicy p) noexcept {
  switch (p) {
    case MissingPolicy::drop_row: return "drop_row";
    case MissingPolicy::dummy_adjust: return "dummy_adjust";
    case MissingPolicy::forbid: return "forbid";
  }
  return "?";
}

std::string_view to_string(ReferenceRule r) noexcept {
  switch (r) {
    case ReferenceRule::highest_dv_mean: return "highest_dv_mean";
    case ReferenceRule::lowest_dv_mean: return "lowest_dv_mean";
    case ReferenceRule::explicit_group: return "explicit";
  }
  return "?";
}

namespace {

template <typename E, std::size_t N>
E parse_enum(std::string_view s, const E (&values)[N], std::string_view what) {
  for (E v : values)
    if (to_string(v) == s) return v;
  throw Error(ErrorKind::schema, fmt::format("unknown {} '{}'", what, s));
}

}  // namespace

Role parse_role(std::string_view s) {
  static constexpr Role all[] = {Role::dependent, Role::independent, Role::control};
  return parse_enum(s, all, "role");
}

Kind parse_kind(std::string_view s) {
  static constexpr Kind all[] = {Kind::numeric, Kind::binary, Kind::ordinal, Kind::nominal};
  return parse_enum(s, all, "kind");
}

MissingPolicy parse_missing_policy(std::string_view s) {
  static constexpr MissingPolicy all[] = {MissingPolicy::drop_row, MissingPolicy::dummy_adjust,
                                          MissingPolicy::forbid};
  return parse_enum(s, all, "missing policy");
}

ReferenceRule parse_reference_rule(std::string_view s) {
  static constexpr ReferenceRule all[] = {ReferenceRule::highest_dv_mean,
                                          ReferenceRule::lowest_dv_mean,
                                          ReferenceRule::explicit_group};
  return parse_enum(s, all, "reference rule");
}

// ---- VariableSpec ----------------------------------------------------------

void VariableSpec::validate() const {
  if (name.empty()) throw Error(ErrorKind::schema, "variable with empty name");
  switch (kind) {
    case Kind::numeric:
    case Kind::ordinal:
      if (!std::isfinite(conceptual_min) || !std::isfinite(conceptual_max) ||
          !(conceptual_max > conceptual_min))
        throw Error(ErrorKind::schema,
                    fmt::format("variable '{}': conceptual_max ({}) must exceed conceptual_min ({})",
                                name, conceptual_max, conceptual_min));
      break;
    case Kind::binary:
      if (conceptual_min != 0.0 || conceptual_max != 1.0)
        throw Error(ErrorKind::schema,
                    fmt::format("variable '{}': binary variables are anchored at 0 and 1", name));
      break;
    case Kind::nominal:
      if (role == Role::dependent)
        throw Error(ErrorKind::schema,
                    fmt::format("variable '{}': a nominal variable cannot be the dependent variable", name));
      if (reference_rule == ReferenceRule::explicit_group && !reference_group)
        throw Error(ErrorKind::schema,
                    fmt::format("variable '{}': reference_rule 'explicit' needs reference_group", name));
      if (missing_policy == MissingPolicy::dummy_adjust && !missing_category)
        throw Error(ErrorKind::schema,
                    fmt::format("variable '{}': nominal dummy_adjust needs missing_category", name));
      break;
  }
  if (kind != Kind::nominal && (reference_group || missing_category))
    throw Error(ErrorKind::schema,
                fmt::format("variable '{}': reference/missing categories apply to nominal variables only",
                            name));
  if (role == Role::dependent && missing_policy == MissingPolicy::dummy_adjust)
    throw Error(ErrorKind::schema,
                fmt::format("variable '{}': the dependent variable cannot be dummy-adjusted", name));
}

// ---- Column / Dataset ------------------------------------------------------

std::size_t Column::missing_count() const {
  if (spec.is_nominal())
    return static_cast<std::size_t>(std::count(labels.begin(), labels.end(), std::nullopt));
  return static_cast<std::size_t>(std::count(numbers.begin(), numbers.end(), std::nullopt));
}

Dataset::Dataset(std::vector<Column> columns) : columns_(std::move(columns)) {
  std::set<std::string_view> seen;
  for (const Column& c : columns_) {
    if (!seen.insert(c.spec.name).second)
      throw Error(ErrorKind::schema, fmt::format("duplicate column name '{}'", c.spec.name));
  }
  if (!columns_.empty()) n_rows_ = columns_.front().size();
  for (const Column& c : columns_) {
    if (c.size() != n_rows_)
      throw Error(ErrorKind::data, fmt::format("column '{}' has {} rows, expected {}", c.spec.name,
                                               c.size(), n_rows_));
  }
}

const Column& Dataset::column(std::string_view name) const {
  for (const Column& c : columns_)
    if (c.spec.name == name) return c;
  throw Error(ErrorKind::schema, fmt::format("no column named '{}'", name));
}

bool Dataset::has_column(std::string_view name) const noexcept {
  return std::any_of(columns_.begin(), columns_.end(),
                     [&](const Column& c) { return c.spec.name == name; });
}

// ---- CSV -------------------------------------------------------------------

bool is_missing_marker(std::string_view cell) noexcept {
  return cell.empty() || cell == "NA" || cell == ".";
}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

std::optional<double> parse_number(std::string_view cell) {
  cell = trim(cell);
  if (is_missing_marker(cell)) return std::nullopt;
  if (!cell.empty() && cell.front() == '+') cell.remove_prefix(1);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), value);
  if (ec != std::errc{} || ptr != cell.data() + cell.size() || !std::isfinite(value))
    return std::nullopt;
  return value;
}

}  // namespace

Dataset parse_csv(std::string_view text, const std::vector<VariableSpec>& specs) {
  std::vector<csv::Row> rows = csv::parse(text);
  // Blank lines carry no data.
  std::erase_if(rows, [](const csv::Row& r) { return r.empty(); });
  if (rows.empty()) throw Error(ErrorKind::input, "CSV input is empty");

  const csv::Row& header = rows.front();
  std::unordered_map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < header.size(); ++i) index.emplace(std::string(trim(header[i])), i);

  std::vector<Column> columns;
  columns.reserve(specs.size());
  for (const VariableSpec& spec : specs) {
    const auto it = index.find(spec.name);
    if (it == index.end())
      throw Error(ErrorKind::schema, fmt::format("column '{}' not found in CSV header", spec.name));
    Column col{spec, {}, {}, std::nullopt};
    const std::size_t at = it->second;
    for (std::size_t r = 1; r < rows.size(); ++r) {
      const std::string_view cell = at < rows[r].size() ? std::string_view(rows[r][at]) : "";
      if (spec.is_nominal()) {
        const std::string_view label = trim(cell);
        col.labels.push_back(is_missing_marker(label) ? std::nullopt
                                                      : std::optional<std::string>(label));
      } else {
        col.numbers.push_back(parse_number(cell));
      }
    }
    columns.push_back(std::move(col));
  }
  return Dataset(std::move(columns));
}

Dataset load_csv(const std::filesystem::path& path, const std::vector<VariableSpec>& specs) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::input, fmt::format("cannot open '{}'", path.string()));
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_csv(buf.str(), specs);
}

// ---- missing policy --------------------------------------------------------

std::pair<Dataset, MissingReport> apply_missing_policy(const Dataset& d) {
  const std::size_t n = d.n_rows();
  MissingReport report;
  report.rows_before = n;

  std::vector<bool> drop(n, false);
  for (const Column& c : d.columns()) {
    const MissingPolicy policy = c.spec.missing_policy;
    const bool absorbs = c.spec.is_nominal() && c.spec.missing_category.has_value();
    if (policy == MissingPolicy::forbid && !absorbs) {
      std::vector<std::size_t> offending;
      for (std::size_t r = 0; r < n; ++r)
        if (c.is_missing(r)) offending.push_back(r + 1);
      if (!offending.empty()) {
        const std::size_t shown = std::min<std::size_t>(offending.size(), 20);
        throw Error(ErrorKind::data,
                    fmt::format("variable '{}' forbids missing values; missing in data row(s) {}{}",
                                c.spec.name,
                                fmt::join(offending.begin(), offending.begin() + shown, ", "),
                                offending.size() > shown ? ", ..." : ""));
      }
    }
    // Nominal variables without an absorbing category fall back to row deletion.
    const bool deletes = !absorbs && (policy == MissingPolicy::drop_row ||
                                      (c.spec.is_nominal() && policy != MissingPolicy::forbid));
    if (deletes)
      for (std::size_t r = 0; r < n; ++r)
        if (c.is_missing(r)) drop[r] = true;
  }

  std::vector<std::size_t> keep;
  keep.reserve(n);
  for (std::size_t r = 0; r < n; ++r)
    if (!drop[r]) keep.push_back(r);

  std::vector<Column> out;
  std::vector<Column> indicators;
  for (const Column& c : d.columns()) {
    MissingResolution res;
    res.variable = c.spec.name;
    res.missing_count = c.missing_count();
    res.policy = c.spec.missing_policy;

    Column kept{c.spec, {}, {}, c.indicator_for};
    if (c.spec.is_nominal()) {
      kept.labels.reserve(keep.size());
      for (std::size_t r : keep) {
        if (c.labels[r]) {
          kept.labels.push_back(c.labels[r]);
        } else {
          kept.labels.push_back(c.spec.missing_category);
        }
      }
      if (c.spec.missing_category && res.missing_count > 0)
        res.absorbed_into = c.spec.missing_category;
      else
        res.rows_dropped = res.missing_count;
    } else if (c.spec.missing_policy == MissingPolicy::dummy_adjust) {
      double total = 0.0;
      std::size_t observed = 0;
      for (std::size_t r : keep)
        if (c.numbers[r]) {
          total += *c.numbers[r];
          ++observed;
        }
      const std::size_t missing_kept = keep.size() - observed;
      if (missing_kept > 0) {
        if (observed == 0)
          throw Error(ErrorKind::data,
                      fmt::format("variable '{}' has no observed values to impute from", c.spec.name));
        const double mean = total / static_cast<double>(observed);
        Column indicator;
        indicator.spec.name = c.spec.name + "_mis";
        indicator.spec.role = c.spec.role;
        indicator.spec.kind = Kind::binary;
        indicator.spec.conceptual_min = 0.0;
        indicator.spec.conceptual_max = 1.0;
        indicator.spec.missing_policy = MissingPolicy::forbid;
        indicator.indicator_for = c.spec.name;
        for (std::size_t r : keep) {
          kept.numbers.push_back(c.numbers[r].value_or(mean));
          indicator.numbers.push_back(c.numbers[r] ? 0.0 : 1.0);
        }
        res.indicator = indicator.spec.name;
        res.fill_value = mean;
        indicators.push_back(std::move(indicator));
      } else {
        for (std::size_t r : keep) kept.numbers.push_back(c.numbers[r]);
      }
    } else {
      for (std::size_t r : keep) kept.numbers.push_back(c.numbers[r]);
      res.rows_dropped = res.missing_count;
    }
    report.variables.push_back(std::move(res));
    out.push_back(std::move(kept));
  }
  for (Column& ind : indicators) {
    if (std::any_of(out.begin(), out.end(),
                    [&](const Column& c) { return c.spec.name == ind.spec.name; }))
      throw Error(ErrorKind::schema,
                  fmt::format("indicator name '{}' collides with an existing column", ind.spec.name));
    out.push_back(std::move(ind));
  }
  report.rows_after = keep.size();
  return {Dataset(std::move(out)), std::move(report)};
}

}  // namespace pctcoef
