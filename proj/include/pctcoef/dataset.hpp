#pragma once
// Tabular input: variable declarations, CSV ingestion and missing-data policy.

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace pctcoef {

enum class Role { dependent, independent, control };
enum class Kind { numeric, binary, ordinal, nominal };
enum class MissingPolicy { drop_row, dummy_adjust, forbid };
enum class ReferenceRule { highest_dv_mean, lowest_dv_mean, explicit_group };

/// Declares one column: what it is, how to scale it, how to treat gaps.
struct VariableSpec {
  std::string name;
  Role role = Role::independent;
  Kind kind = Kind::numeric;
  /// Conceptual anchors (c_n, c_x) on the original scale. Binary variables
  /// are always anchored at 0 and 1; nominal variables have none.
  double conceptual_min = 0.0;
  double conceptual_max = 1.0;
  MissingPolicy missing_policy = MissingPolicy::drop_row;
  /// Nominal only.
  std::optional<std::string> reference_group;
  ReferenceRule reference_rule = ReferenceRule::highest_dv_mean;
  /// Nominal only: category that absorbs missing cells. Without it, missing
  /// nominal cells are dropped (or rejected under forbid).
  std::optional<std::string> missing_category;

  /// Throws Error(schema) when the declaration is internally inconsistent.
  void validate() const;
  bool is_nominal() const noexcept { return kind == Kind::nominal; }
};

std::string_view to_string(Role r) noexcept;
std::string_view to_string(Kind k) noexcept;
std::string_view to_string(MissingPolicy p) noexcept;
std::string_view to_string(ReferenceRule r) noexcept;
Role parse_role(std::string_view s);
Kind parse_kind(std::string_view s);
MissingPolicy parse_missing_policy(std::string_view s);
ReferenceRule parse_reference_rule(std::string_view s);

/// One ingested column. Nominal columns fill `labels`, all others `numbers`;
/// std::nullopt is the missing marker.
struct Column {
  VariableSpec spec;
  std::vector<std::optional<double>> numbers;
  std::vector<std::optional<std::string>> labels;
  /// Set on `<name>_mis` indicators created by dummy adjustment.
  std::optional<std::string> indicator_for;

  std::size_t size() const noexcept { return spec.is_nominal() ? labels.size() : numbers.size(); }
  bool is_missing(std::size_t row) const {
    return spec.is_nominal() ? !labels[row].has_value() : !numbers[row].has_value();
  }
  std::size_t missing_count() const;
};

class Dataset {
 public:
  Dataset() = default;
  /// Validates equal lengths and unique names.
  explicit Dataset(std::vector<Column> columns);

  std::size_t n_rows() const noexcept { return n_rows_; }
  const std::vector<Column>& columns() const noexcept { return columns_; }
  const Column& column(std::string_view name) const;
  bool has_column(std::string_view name) const noexcept;

 private:
  std::vector<Column> columns_;
  std::size_t n_rows_ = 0;
};

struct MissingResolution {
  std::string variable;
  std::size_t missing_count = 0;
  MissingPolicy policy = MissingPolicy::drop_row;
  std::size_t rows_dropped = 0;             ///< drop_row: rows removed because of this variable
  std::optional<std::string> indicator;     ///< dummy_adjust: name of the created indicator
  std::optional<double> fill_value;         ///< dummy_adjust: imputed mean
  std::optional<std::string> absorbed_into; ///< nominal: category given to missing cells
};

struct MissingReport {
  std::size_t rows_before = 0;
  std::size_t rows_after = 0;
  std::vector<MissingResolution> variables;
};

/// CSV cells that mean "missing": empty, NA, and a lone period.
bool is_missing_marker(std::string_view cell) noexcept;

/// Reads the spec'd columns from a headed CSV file. Unparseable numeric
/// cells become missing. Columns not named in `specs` are ignored.
Dataset load_csv(const std::filesystem::path& path, const std::vector<VariableSpec>& specs);

/// Same as load_csv but from in-memory text.
Dataset parse_csv(std::string_view text, const std::vector<VariableSpec>& specs);

/// Resolves every missing cell. Row deletion runs first, then mean
/// imputation on the surviving rows, so an imputed column keeps the mean of
/// its observed cells. The result holds no missing markers.
std::pair<Dataset, MissingReport> apply_missing_policy(const Dataset& d);

}  // namespace pctcoef
