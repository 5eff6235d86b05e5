#include "pctcoef/report.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>

#include "pctcoef/csv.hpp"
#include "pctcoef/error.hpp"

namespace pctcoef {

// ---- row ordering ----------------------------------------------------------

std::vector<ReportRow> order_rows(const FitResult& fit, const std::vector<IvTag>& tags,
                                  const std::vector<NominalExpansion>& nominals) {
  if (tags.size() != fit.coefficients.size())
    throw Error(ErrorKind::schema, "order_rows: one tag per coefficient required");

  auto by_abs_bp = [&](std::vector<std::size_t>& idx) {
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
      return std::abs(fit.coefficients[a].b_p) > std::abs(fit.coefficients[b].b_p);
    });
  };
  auto coefficient_row = [&](std::size_t i) {
    return ReportRow{ReportRow::Type::coefficient, fit.coefficients[i].name, i, tags[i].variable};
  };

  std::vector<std::size_t> main_batch;
  std::vector<std::size_t> indicators;
  std::vector<std::string> nominal_order;
  for (std::size_t i = 0; i < tags.size(); ++i) {
    if (tags[i].batch == Batch::nominal) {
      if (std::find(nominal_order.begin(), nominal_order.end(), tags[i].variable) == nominal_order.end())
        nominal_order.push_back(tags[i].variable);
    } else if (tags[i].indicator_for) {
      indicators.push_back(i);
    } else {
      main_batch.push_back(i);
    }
  }

  std::vector<ReportRow> rows;
  by_abs_bp(main_batch);
  std::vector<bool> placed(tags.size(), false);
  for (std::size_t i : main_batch) {
    rows.push_back(coefficient_row(i));
    for (std::size_t k : indicators) {
      if (!placed[k] && *tags[k].indicator_for == tags[i].variable) {
        rows.push_back(coefficient_row(k));
        placed[k] = true;
      }
    }
  }
  // Indicators whose source is not an IV: end of the main batch.
  for (std::size_t k : indicators)
    if (!placed[k]) rows.push_back(coefficient_row(k));

  for (const std::string& var : nominal_order) {
    const auto nom = std::find_if(nominals.begin(), nominals.end(),
                                  [&](const NominalExpansion& n) { return n.variable == var; });
    if (nom != nominals.end())
      rows.push_back(ReportRow{ReportRow::Type::reference,
                               fmt::format("{}_{} (reference)", var, nom->reference), 0, var});
    std::vector<std::size_t> batch;
    for (std::size_t i = 0; i < tags.size(); ++i)
      if (tags[i].batch == Batch::nominal && tags[i].variable == var) batch.push_back(i);
    by_abs_bp(batch);
    for (std::size_t i : batch) rows.push_back(coefficient_row(i));
  }
  return rows;
}

// ---- nominal summaries -----------------------------------------------------

NominalSummary nominal_pairwise(const std::string& variable, const std::string& reference,
                                const std::vector<std::string>& groups, const std::vector<double>& b_p) {
  if (groups.size() != b_p.size() || groups.size() < 2)
    throw Error(ErrorKind::schema,
                fmt::format("nominal summary for '{}' needs at least two groups with coefficients", variable));
  NominalSummary s;
  s.variable = variable;
  s.reference = reference;
  double total = 0.0;
  for (std::size_t a = 0; a < groups.size(); ++a) {
    for (std::size_t b = a + 1; b < groups.size(); ++b) {
      GroupPair pair{groups[b], groups[a], b_p[b] - b_p[a]};
      total += std::abs(pair.gap);
      if (s.pairs.empty() || std::abs(pair.gap) > std::abs(s.largest_pair.gap)) s.largest_pair = pair;
      s.pairs.push_back(std::move(pair));
    }
  }
  s.pair_count = s.pairs.size();
  s.mean_abs_pairwise = total / static_cast<double>(s.pair_count);
  return s;
}

NominalSummary nominal_pairwise(const FitResult& fit, const NominalExpansion& nominal) {
  std::vector<std::string> groups{nominal.reference};
  std::vector<double> b_p{0.0};
  for (const std::string& g : nominal.groups) {
    if (g == nominal.reference) continue;
    groups.push_back(g);
    b_p.push_back(fit.coefficient(fmt::format("{}_{}", nominal.variable, g)).b_p);
  }
  return nominal_pairwise(nominal.variable, nominal.reference, groups, b_p);
}

// ---- ratio notes -------------------------------------------------------------

std::vector<RatioNote> ratio_notes(const FitResult& fit,
                                   const std::vector<std::pair<std::string, std::string>>& pairs,
                                   std::vector<std::string>* warnings) {
  std::vector<RatioNote> out;
  for (const auto& [first, second] : pairs) {
    const double a = std::abs(fit.coefficient(first).b_p);
    const double b = std::abs(fit.coefficient(second).b_p);
    out.push_back(RatioNote{RatioNote::Type::differential, first, second, a - b});
    if (b == 0.0) {
      if (warnings)
        warnings->push_back(fmt::format("ratio of '{}' to '{}' skipped: b_p of '{}' is zero", first,
                                        second, second));
      continue;
    }
    out.push_back(RatioNote{RatioNote::Type::proportional, first, second, (a - b) / b});
    out.push_back(RatioNote{RatioNote::Type::multiple, first, second, a / b});
  }
  return out;
}

// ---- assembly --------------------------------------------------------------

ReportBundle assemble_report(const DesignMatrix& dm, const FitResult& fit, const ReplicateSet& reps,
                             const BootstrapConfig& cfg, MissingReport missing) {
  if (fit.coefficients.empty()) throw Error(ErrorKind::schema, "report needs at least one IV");
  ReportBundle b;
  b.dv_name = dm.dv.name;
  b.dv_percent_mean =
      std::accumulate(dm.dv.values.begin(), dm.dv.values.end(), 0.0) / static_cast<double>(dm.n_rows());
  b.fit = fit;
  b.rows = order_rows(fit, dm.tags, dm.nominals);
  b.inference = coefficient_inference(reps, fit, cfg);
  b.bootstrap = cfg;
  b.redraws = reps.redraws;
  b.missing = std::move(missing);
  b.warnings = dm.warnings;
  b.warnings.insert(b.warnings.end(), fit.warnings.begin(), fit.warnings.end());

  std::vector<std::string> order;
  for (const ReportRow& r : b.rows)
    if (r.type == ReportRow::Type::coefficient) order.push_back(r.label);
  if (order.size() >= 2) {
    std::tie(b.scalar_matrix, b.directional_matrix) = comparison_matrices(reps, fit, cfg, order);
  } else {
    b.scalar_matrix = ComparisonMatrix{ComparisonKind::scalar, order, {}};
    b.directional_matrix = ComparisonMatrix{ComparisonKind::directional, order, {}};
  }

  for (const NominalExpansion& n : dm.nominals) b.nominal_summaries.push_back(nominal_pairwise(fit, n));

  std::vector<std::pair<std::string, std::string>> pairs;
  for (std::size_t i = 0; i < order.size(); ++i)
    for (std::size_t j = i + 1; j < order.size(); ++j) {
      // larger efficiency first
      if (std::abs(fit.coefficient(order[j]).b_p) > std::abs(fit.coefficient(order[i]).b_p))
        pairs.emplace_back(order[j], order[i]);
      else
        pairs.emplace_back(order[i], order[j]);
    }
  b.ratio_notes = ratio_notes(fit, pairs, &b.warnings);
  return b;
}

// ---- formatting ------------------------------------------------------------

namespace {

std::string strip_negative_zero(std::string s) {
  if (s.find_first_not_of("-0.") == std::string::npos && s.front() == '-') s.erase(0, 1);
  return s;
}

std::string alpha_text(double alpha) {
  std::string s = fmt::format("{}", alpha);
  if (s.rfind("0.", 0) == 0) s.erase(0, 1);
  return s;
}

std::string stars_legend(const std::vector<double>& alphas) {
  std::string out;
  for (std::size_t i = 0; i < alphas.size(); ++i) {
    if (i) out += "; ";
    out += fmt::format("{} p < {}", stars_text(static_cast<int>(i + 1)), alpha_text(alphas[i]));
  }
  return out;
}

/// Shortest text that parses back to the same double.
std::string exact(double v) { return fmt::format("{}", v); }

}  // namespace

std::string format_coefficient(double value) {
  std::string s = strip_negative_zero(fmt::format("{:.3f}", value));
  if (s.rfind("0.", 0) == 0) s.erase(0, 1);
  else if (s.rfind("-0.", 0) == 0) s.erase(1, 1);
  return s;
}

std::string format_fixed3(double value) { return strip_negative_zero(fmt::format("{:.3f}", value)); }

std::string stars_text(int stars) { return std::string(static_cast<std::size_t>(std::max(0, stars)), '*'); }

namespace {

std::string coefficient_cell(const ReportBundle& b, const std::string& key, bool with_stars) {
  const auto it = b.inference.find(key);
  if (it == b.inference.end()) return "—";
  const BootstrapDistribution& d = it->second;
  std::string s = fmt::format("{} [{}, {}]", format_coefficient(d.point_estimate),
                              format_fixed3(d.ci_low), format_fixed3(d.ci_high));
  if (with_stars) {
    const int stars = significance_stars(d.p_value, d.p_below_resolution, b.bootstrap.n_bootstrap,
                                         b.bootstrap.alpha_levels);
    if (stars > 0) s += " " + stars_text(stars);
  }
  return s;
}

}  // namespace

std::string render_coefficients_md(const ReportBundle& b) {
  std::string out;
  out += fmt::format("# Coefficients predicting {}\n\n", b.dv_name);
  out += "| | raw b (b_w) | standardized beta (β) | percentage coefficient (b_p) |\n";
  out += "|---|---|---|---|\n";
  out += fmt::format("| Intercept | {} | — | {} |\n", coefficient_cell(b, "intercept_raw", true),
                     coefficient_cell(b, "intercept_p", true));
  for (const ReportRow& r : b.rows) {
    if (r.type == ReportRow::Type::reference) {
      out += fmt::format("| {} | — | — | — |\n", r.label);
      continue;
    }
    out += fmt::format("| {} | {} | {} | {} |\n", r.label, coefficient_cell(b, "b_w:" + r.label, true),
                       coefficient_cell(b, "beta:" + r.label, false),
                       coefficient_cell(b, "b_p:" + r.label, true));
  }
  out += fmt::format("| Total r² | {} | {} | {} |\n\n", format_coefficient(b.fit.r_squared),
                     format_coefficient(b.fit.r_squared), format_coefficient(b.fit.r_squared_p));
  out += fmt::format("n = {}. Cells: coefficient [{}% percentile bootstrap CI], {} replicates.\n\n",
                     b.fit.n_used, exact(b.bootstrap.ci_level * 100.0), b.bootstrap.n_bootstrap);
  out += stars_legend(b.bootstrap.alpha_levels) + ".\n";
  return out;
}

std::string render_coefficients_csv(const ReportBundle& b) {
  const char* flavors[] = {"b_w", "beta", "b_p"};
  csv::Row header{"row_type", "label", "variable"};
  for (const char* f : flavors)
    for (const char* col : {"", "_mean", "_se", "_ci_low", "_ci_high", "_p", "_p_below_resolution"})
      header.push_back(std::string(f) + col);
  std::string out = csv::join(header) + "\n";

  auto stats = [&](csv::Row& row, const std::string& key) {
    const auto it = b.inference.find(key);
    if (it == b.inference.end()) {
      row.insert(row.end(), 7, "");
      return;
    }
    const BootstrapDistribution& d = it->second;
    for (double v : {d.point_estimate, d.mean, d.se, d.ci_low, d.ci_high, d.p_value})
      row.push_back(exact(v));
    row.push_back(d.p_below_resolution ? "1" : "0");
  };

  {
    csv::Row row{"intercept", "Intercept", ""};
    stats(row, "intercept_raw");
    row.insert(row.end(), 7, "");
    stats(row, "intercept_p");
    out += csv::join(row) + "\n";
  }
  for (const ReportRow& r : b.rows) {
    csv::Row row{r.type == ReportRow::Type::reference ? "reference" : "coefficient", r.label, r.variable};
    if (r.type == ReportRow::Type::reference) {
      row.insert(row.end(), 21, "");
    } else {
      for (const char* f : flavors) stats(row, std::string(f) + ":" + r.label);
    }
    out += csv::join(row) + "\n";
  }
  csv::Row r2{"r_squared", "Total r2", ""};
  for (double v : {b.fit.r_squared, b.fit.r_squared, b.fit.r_squared_p}) {
    r2.push_back(exact(v));
    r2.insert(r2.end(), 6, "");
  }
  out += csv::join(r2) + "\n";
  return out;
}

std::string render_matrix_md(const ReportBundle& b, const ComparisonMatrix& m) {
  const bool scalar = m.kind == ComparisonKind::scalar;
  std::string out;
  out += scalar ? "# Scalar comparison of efficiencies, d_s = |b_p(i)| - |b_p(j)|\n\n"
                : "# Directional comparison of efficiencies, d_d = b_p(i) - b_p(j)\n\n";
  const std::size_t g = m.iv_names.size();
  auto column_letter = [](std::size_t c) {
    std::string s;
    for (std::size_t x = c + 1; x > 0; x = (x - 1) / 26) s.insert(s.begin(), static_cast<char>('A' + (x - 1) % 26));
    return s;
  };
  out += "| j \\ i |";
  for (std::size_t c = 0; c < g; ++c) out += fmt::format(" {} {} |", column_letter(c), m.iv_names[c]);
  out += "\n|---|";
  for (std::size_t c = 0; c < g; ++c) out += "---|";
  out += "\n";
  for (std::size_t r = 0; r < g; ++r) {
    out += fmt::format("| {} {} |", r + 1, m.iv_names[r]);
    for (std::size_t c = 0; c < g; ++c) {
      if (r == c || !m.cells[r][c]) {
        out += " -- |";
        continue;
      }
      const ComparisonCell& cell = *m.cells[r][c];
      out += fmt::format(" {}{} |", format_fixed3(cell.estimate), stars_text(cell.stars));
    }
    out += "\n";
  }
  out += fmt::format("\nColumn IV is i, row IV is j. Estimates come from the full-sample fit; "
                     "p-values from {} bootstrap replicates.\n\n",
                     b.bootstrap.n_bootstrap);
  out += stars_legend(b.bootstrap.alpha_levels) + ".\n";
  return out;
}

std::string render_matrix_csv(const ComparisonMatrix& m) {
  std::string out = csv::join({"row", "column", "j", "i", "estimate", "mean", "se", "ci_low", "ci_high",
                               "p_value", "p_below_resolution", "stars"}) +
                    "\n";
  const std::size_t g = m.iv_names.size();
  for (std::size_t r = 0; r < g; ++r)
    for (std::size_t c = 0; c < g; ++c) {
      if (r == c || !m.cells[r][c]) continue;
      const ComparisonCell& cell = *m.cells[r][c];
      const BootstrapDistribution& d = cell.distribution;
      out += csv::join({std::to_string(r + 1), std::to_string(c + 1), m.iv_names[r], m.iv_names[c],
                        exact(cell.estimate), exact(d.mean), exact(d.se), exact(d.ci_low),
                        exact(d.ci_high), exact(cell.p_value), cell.p_below_resolution ? "1" : "0",
                        std::to_string(cell.stars)}) +
             "\n";
    }
  return out;
}

std::string render_summary_md(const ReportBundle& b) {
  std::string out;
  out += "# Summary\n\n";
  out += fmt::format("- Dependent variable: {} (mean on the percentage scale {})\n", b.dv_name,
                     format_fixed3(b.dv_percent_mean));
  out += fmt::format("- Cases used: {}\n", b.fit.n_used);
  out += fmt::format("- r²: {} (raw fit), {} (percentage fit)\n", exact(b.fit.r_squared), exact(b.fit.r_squared_p));
  out += fmt::format("- Bootstrap: {} replicates, seed {}, {}% percentile intervals, {} rank-deficient "
                     "resample(s) redrawn\n\n",
                     b.bootstrap.n_bootstrap, b.bootstrap.seed, exact(b.bootstrap.ci_level * 100.0), b.redraws);

  if (!b.missing.variables.empty()) {
    out += "## Missing data\n\n";
    out += fmt::format("Rows before: {}, after: {}.\n\n", b.missing.rows_before, b.missing.rows_after);
    for (const MissingResolution& m : b.missing.variables) {
      if (m.missing_count == 0) continue;
      out += fmt::format("- {}: {} missing, policy {}", m.variable, m.missing_count, to_string(m.policy));
      if (m.indicator)
        out += fmt::format("; imputed at mean {} with indicator {}", exact(*m.fill_value), *m.indicator);
      else if (m.absorbed_into)
        out += fmt::format("; assigned to category '{}'", *m.absorbed_into);
      else
        out += fmt::format("; {} row(s) dropped", m.rows_dropped);
      out += "\n";
    }
    out += "\n";
  }

  if (!b.nominal_summaries.empty()) {
    out += "## Nominal variables\n\n";
    for (const NominalSummary& s : b.nominal_summaries) {
      out += fmt::format("### {} (reference: {})\n\n", s.variable, s.reference);
      out += fmt::format("- Pairwise group differences: {}\n", s.pair_count);
      out += fmt::format("- Largest difference: {} vs {}, b_p = {}\n", s.largest_pair.first,
                         s.largest_pair.second, format_coefficient(s.largest_pair.gap));
      out += fmt::format("- Mean absolute pairwise difference: {}\n", exact(s.mean_abs_pairwise));
      if (b.dv_percent_mean != 0.0) {
        out += fmt::format("- Largest difference relative to the mean {}: {:.2f}%\n", b.dv_name,
                           std::abs(s.largest_pair.gap) / b.dv_percent_mean * 100.0);
        out += fmt::format("- Mean difference relative to the mean {}: {:.2f}%\n", b.dv_name,
                           s.mean_abs_pairwise / b.dv_percent_mean * 100.0);
      }
      out += "\n";
    }
  }

  if (!b.ratio_notes.empty()) {
    out += "## Efficiency comparisons\n\n";
    out += "| i | j | abs(b_p(i)) - abs(b_p(j)) | (abs(b_p(i)) - abs(b_p(j))) / abs(b_p(j)) | abs(b_p(i)) / abs(b_p(j)) |\n";
    out += "|---|---|---|---|---|\n";
    for (std::size_t k = 0; k < b.ratio_notes.size();) {
      const RatioNote& d = b.ratio_notes[k];
      std::string prop = "—";
      std::string mult = "—";
      std::size_t next = k + 1;
      if (next < b.ratio_notes.size() && b.ratio_notes[next].type == RatioNote::Type::proportional) {
        prop = fmt::format("{:.3f}", b.ratio_notes[next].value);
        mult = fmt::format("{:.3f}", b.ratio_notes[next + 1].value);
        next += 2;
      }
      out += fmt::format("| {} | {} | {} | {} | {} |\n", d.first, d.second, format_fixed3(d.value), prop, mult);
      k = next;
    }
    out += "\n";
  }

  if (!b.warnings.empty()) {
    out += "## Warnings\n\n";
    for (const std::string& w : b.warnings) out += "- " + w + "\n";
  }
  return out;
}

std::vector<std::filesystem::path> render(const ReportBundle& bundle, const std::filesystem::path& out_dir,
                                          const RenderFormats& formats) {
  if (bundle.fit.coefficients.empty()) throw Error(ErrorKind::schema, "nothing to render: no IVs");
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw Error(ErrorKind::io, fmt::format("cannot create '{}': {}", out_dir.string(), ec.message()));

  std::vector<std::filesystem::path> written;
  auto write = [&](const char* name, const std::string& text) {
    const std::filesystem::path path = out_dir / name;
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    f << text;
    f.close();
    if (!f) throw Error(ErrorKind::io, fmt::format("cannot write '{}'", path.string()));
    written.push_back(path);
  };
  if (formats.markdown) {
    write("coefficients.md", render_coefficients_md(bundle));
    write("scalar_matrix.md", render_matrix_md(bundle, bundle.scalar_matrix));
    write("directional_matrix.md", render_matrix_md(bundle, bundle.directional_matrix));
  }
  if (formats.csv) {
    write("coefficients.csv", render_coefficients_csv(bundle));
    write("scalar_matrix.csv", render_matrix_csv(bundle.scalar_matrix));
    write("directional_matrix.csv", render_matrix_csv(bundle.directional_matrix));
  }
  write("summary.md", render_summary_md(bundle));
  return written;
}

}  // namespace pctcoef
