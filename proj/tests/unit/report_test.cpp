#include <gtest/gtest.h>

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "pctcoef/csv.hpp"
#include "pctcoef/error.hpp"
#include "pctcoef/report.hpp"
#include "oracles.hpp"

using namespace pctcoef;

namespace {

struct Iv {
  std::string name;
  double b_p;
  IvTag tag;
};

IvTag main_tag(std::string var) { return IvTag{Batch::numeric_binary, std::move(var), {}, {}}; }
IvTag indicator_tag(std::string var, std::string source) {
  return IvTag{Batch::numeric_binary, std::move(var), {}, std::move(source)};
}
IvTag nominal_tag(std::string var, std::string group) {
  return IvTag{Batch::nominal, std::move(var), std::move(group), {}};
}

// Survey-example coefficients, declared out of table order.
std::vector<Iv> survey_ivs() {
  return {
      {"RAC_asn", -0.031, nominal_tag("RAC", "asn")}, {"GEN", 0.034, main_tag("GEN")},
      {"INC_mis", -0.022, indicator_tag("INC_mis", "INC")}, {"RAC_blk", -0.071, nominal_tag("RAC", "blk")},
      {"EDU", -0.035, main_tag("EDU")},                   {"INC", -0.164, main_tag("INC")},
      {"RAC_hsp", -0.047, nominal_tag("RAC", "hsp")},     {"AGE", -0.269, main_tag("AGE")},
      {"RAC_wht", -0.073, nominal_tag("RAC", "wht")},
  };
}

FitResult fit_of(const std::vector<Iv>& ivs) {
  FitResult f;
  for (const Iv& iv : ivs) f.coefficients.push_back({iv.name, iv.b_p * 2, iv.b_p, iv.b_p});
  f.n_used = 100;
  return f;
}

std::vector<IvTag> tags_of(const std::vector<Iv>& ivs) {
  std::vector<IvTag> t;
  for (const Iv& iv : ivs) t.push_back(iv.tag);
  return t;
}

NominalExpansion race() {
  NominalExpansion n;
  n.variable = "RAC";
  n.reference = "otr";
  n.groups = {"asn", "blk", "hsp", "otr", "wht"};
  return n;
}

std::vector<std::string> labels(const std::vector<ReportRow>& rows) {
  std::vector<std::string> out;
  for (const ReportRow& r : rows) out.push_back(r.label);
  return out;
}

Column num_col(std::string name, double lo, double hi, const std::vector<double>& v,
               Role role = Role::independent) {
  Column c;
  c.spec.name = std::move(name);
  c.spec.role = role;
  c.spec.kind = Kind::numeric;
  c.spec.conceptual_min = lo;
  c.spec.conceptual_max = hi;
  for (double x : v) c.numbers.emplace_back(x);
  return c;
}

ReportBundle small_bundle() {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0, 10);
  std::normal_distribution<double> z(0, 1);
  std::vector<double> a, b, y;
  std::vector<std::optional<std::string>> g;
  const char* groups[] = {"n", "s", "e", "w"};
  for (int i = 0; i < 120; ++i) {
    a.push_back(u(rng));
    b.push_back(u(rng));
    g.emplace_back(groups[i % 4]);
    y.push_back(10 + a.back() - 0.5 * b.back() + (i % 4) + z(rng));
  }
  Column gc;
  gc.spec.name = "G";
  gc.spec.kind = Kind::nominal;
  gc.labels = g;
  const DesignMatrix dm = build_design_matrix(
      Dataset({num_col("y", 0, 40, y, Role::dependent), num_col("a", 0, 10, a), num_col("b", 0, 10, b), gc}));
  BootstrapConfig cfg;
  cfg.n_bootstrap = 200;
  cfg.seed = 42;
  const FitResult fit = fit_three_ways(dm);
  return assemble_report(dm, fit, bootstrap_fits(dm, cfg, 2), cfg);
}

double parse_double(const std::string& s) {
  double v = 0;
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  EXPECT_EQ(ec, std::errc{}) << s;
  EXPECT_EQ(p, s.data() + s.size()) << s;
  return v;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

}  // namespace

TEST(OrderRows, SurveyExampleOrder) {
  const auto ivs = survey_ivs();
  const auto rows = order_rows(fit_of(ivs), tags_of(ivs), {race()});
  const std::vector<std::string> expected{"AGE",     "INC",     "INC_mis", "EDU",     "GEN",
                                          "RAC_otr (reference)", "RAC_wht", "RAC_blk", "RAC_hsp", "RAC_asn"};
  EXPECT_EQ(labels(rows), expected);
  EXPECT_EQ(rows[5].type, ReportRow::Type::reference);
  EXPECT_EQ(rows[6].variable, "RAC");
}

TEST(OrderRows, SingleIv) {
  const std::vector<Iv> ivs{{"x", 0.5, main_tag("x")}};
  EXPECT_EQ(labels(order_rows(fit_of(ivs), tags_of(ivs))), std::vector<std::string>{"x"});
}

TEST(OrderRows, TiesKeepDeclarationOrder) {
  const std::vector<Iv> ivs{{"b", -0.2, main_tag("b")}, {"a", 0.2, main_tag("a")}, {"c", 0.3, main_tag("c")}};
  EXPECT_EQ(labels(order_rows(fit_of(ivs), tags_of(ivs))), (std::vector<std::string>{"c", "b", "a"}));
}

TEST(OrderRows, PermutationPlusOneReferencePerNominal) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-1, 1);
  for (int rep = 0; rep < 50; ++rep) {
    auto ivs = survey_ivs();
    for (Iv& iv : ivs) iv.b_p = u(rng);
    std::shuffle(ivs.begin(), ivs.end(), rng);
    const auto rows = order_rows(fit_of(ivs), tags_of(ivs), {race()});
    ASSERT_EQ(rows.size(), ivs.size() + 1);
    std::vector<int> seen(ivs.size(), 0);
    int refs = 0;
    std::size_t last_main = 0, first_nominal = rows.size();
    for (std::size_t k = 0; k < rows.size(); ++k) {
      if (rows[k].type == ReportRow::Type::reference) {
        ++refs;
        first_nominal = std::min(first_nominal, k);
        continue;
      }
      ++seen[rows[k].iv];
      if (ivs[rows[k].iv].tag.batch == Batch::nominal) first_nominal = std::min(first_nominal, k);
      else last_main = k;
      if (rows[k].label == "INC_mis") {
        EXPECT_EQ(rows[k - 1].label, "INC");
      }
    }
    EXPECT_EQ(refs, 1);
    EXPECT_LT(last_main, first_nominal);
    for (int s : seen) EXPECT_EQ(s, 1);
    // contiguous nominal block, headed by the reference line
    EXPECT_EQ(rows[first_nominal].type, ReportRow::Type::reference);
  }
}

TEST(NominalPairwise, RaceGroups) {
  const std::vector<std::string> groups{"Others", "wht", "blk", "hsp", "asn"};
  const std::vector<double> b_p{0.0, -0.073, -0.071, -0.047, -0.031};
  const NominalSummary s = nominal_pairwise("RAC", "Others", groups, b_p);
  EXPECT_EQ(s.pair_count, 10u);
  EXPECT_EQ(s.pairs.size(), 10u);
  EXPECT_EQ(s.largest_pair.first, "wht");
  EXPECT_EQ(s.largest_pair.second, "Others");
  EXPECT_NEAR(s.largest_pair.gap, -0.073, 1e-15);
  EXPECT_NEAR(s.mean_abs_pairwise, 0.0372, 1e-12);
  EXPECT_NEAR(s.mean_abs_pairwise, oracle::mean_abs_pairwise(b_p), 1e-12);
}

TEST(NominalPairwise, TwoGroupsAndEqualGroups) {
  const auto two = nominal_pairwise("V", "r", {"r", "x"}, {0.0, -0.4});
  EXPECT_EQ(two.pair_count, 1u);
  EXPECT_DOUBLE_EQ(two.mean_abs_pairwise, 0.4);
  const auto flat = nominal_pairwise("V", "r", {"r", "x", "y"}, {0.0, 0.0, 0.0});
  for (const auto& p : flat.pairs) EXPECT_EQ(p.gap, 0.0);
  EXPECT_THROW(nominal_pairwise("V", "r", {"r"}, {0.0}), Error);
}

TEST(NominalPairwise, MatchesBruteForceOnRandomGroups) {
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> u(-1, 1);
  for (int g = 2; g < 12; ++g) {
    std::vector<std::string> names;
    std::vector<double> b{0.0};
    names.push_back("ref");
    for (int k = 1; k < g; ++k) {
      names.push_back("g" + std::to_string(k));
      b.push_back(u(rng));
    }
    const auto s = nominal_pairwise("V", "ref", names, b);
    EXPECT_EQ(s.pair_count, static_cast<std::size_t>((g * g - g) / 2));
    EXPECT_NEAR(s.mean_abs_pairwise, oracle::mean_abs_pairwise(b), 1e-12);
  }
}

TEST(NominalPairwise, FromFitPutsReferenceFirst) {
  const auto ivs = survey_ivs();
  const auto s = nominal_pairwise(fit_of(ivs), race());
  EXPECT_EQ(s.pair_count, 10u);
  EXPECT_EQ(s.largest_pair.first, "wht");
  EXPECT_EQ(s.largest_pair.second, "otr");
  EXPECT_NEAR(s.mean_abs_pairwise, 0.0372, 1e-12);
}

TEST(RatioNotes, Values) {
  const auto fit = fit_of(survey_ivs());
  const auto notes = ratio_notes(fit, {{"AGE", "EDU"}, {"AGE", "AGE"}});
  ASSERT_EQ(notes.size(), 6u);
  EXPECT_EQ(notes[0].type, RatioNote::Type::differential);
  EXPECT_NEAR(notes[0].value, 0.234, 1e-12);
  EXPECT_NEAR(notes[2].value, 7.686, 0.0005);
  EXPECT_EQ(notes[3].value, 0.0);
  EXPECT_EQ(notes[4].value, 0.0);
  EXPECT_EQ(notes[5].value, 1.0);
}

TEST(RatioNotes, ZeroDenominatorWarns) {
  std::vector<Iv> ivs{{"a", 0.2, main_tag("a")}, {"z", 0.0, main_tag("z")}};
  std::vector<std::string> warnings;
  const auto notes = ratio_notes(fit_of(ivs), {{"a", "z"}}, &warnings);
  ASSERT_EQ(notes.size(), 1u);
  EXPECT_EQ(notes[0].type, RatioNote::Type::differential);
  EXPECT_EQ(warnings.size(), 1u);
}

TEST(Formatting, TableStyle) {
  EXPECT_EQ(format_coefficient(0.034), ".034");
  EXPECT_EQ(format_coefficient(-0.00807), "-.008");
  EXPECT_EQ(format_coefficient(-0.0001), ".000");
  EXPECT_EQ(format_coefficient(1.25), "1.250");
  EXPECT_EQ(format_fixed3(-0.105), "-0.105");
  EXPECT_EQ(stars_text(3), "***");
  EXPECT_EQ(stars_text(0), "");
}

TEST(Render, CoefficientTableLayout) {
  const ReportBundle b = small_bundle();
  const std::string md = render_coefficients_md(b);
  EXPECT_NE(md.find("| Total r² |"), std::string::npos);
  EXPECT_NE(md.find("| G_"), std::string::npos);
  EXPECT_NE(md.find("(reference) | — | — | — |"), std::string::npos);
  EXPECT_NE(md.find("b_w"), std::string::npos);
  EXPECT_NE(md.find("b_p"), std::string::npos);
  EXPECT_NE(md.find(" ["), std::string::npos);
}

TEST(Render, CsvParsesBackToNumbers) {
  const ReportBundle b = small_bundle();
  const auto rows = csv::parse(render_coefficients_csv(b));
  ASSERT_GE(rows.size(), 3u);
  const auto& header = rows[0];
  const auto col = [&](std::string_view name) {
    return static_cast<std::size_t>(std::find(header.begin(), header.end(), name) - header.begin());
  };
  for (std::size_t r = 1; r < rows.size(); ++r) {
    if (rows[r][0] != "coefficient") continue;
    const std::string& label = rows[r][1];
    EXPECT_EQ(parse_double(rows[r][col("b_p")]), b.fit.coefficient(label).b_p);
    EXPECT_EQ(parse_double(rows[r][col("b_w")]), b.fit.coefficient(label).b_w);
    EXPECT_EQ(parse_double(rows[r][col("b_p_ci_low")]), b.inference.at("b_p:" + label).ci_low);
    const double p = parse_double(rows[r][col("b_p_p")]);
    EXPECT_GE(p, 0.0);
    EXPECT_LE(p, 1.0);
  }
  const auto m = csv::parse(render_matrix_csv(b.scalar_matrix));
  const std::size_t g = b.scalar_matrix.iv_names.size();
  EXPECT_EQ(m.size(), 1 + g * g - g);
  for (std::size_t r = 1; r < m.size(); ++r) {
    const std::size_t row = std::stoul(m[r][0]) - 1, column = std::stoul(m[r][1]) - 1;
    EXPECT_EQ(parse_double(m[r][4]), b.scalar_matrix.at(row, column).estimate);
  }
}

TEST(Render, DeterministicBytes) {
  const auto dir = std::filesystem::temp_directory_path() / "pctcoef_report_test";
  std::filesystem::remove_all(dir);
  const ReportBundle b = small_bundle();
  const auto files_a = render(b, dir / "a");
  const auto files_b = render(small_bundle(), dir / "b");
  ASSERT_EQ(files_a.size(), 7u);
  ASSERT_EQ(files_b.size(), 7u);
  for (std::size_t k = 0; k < files_a.size(); ++k) EXPECT_EQ(slurp(files_a[k]), slurp(files_b[k]));
  EXPECT_EQ(render(b, dir / "md", RenderFormats{true, false}).size(), 4u);
  std::filesystem::remove_all(dir);
}

TEST(Render, MatrixMarkdownLayout) {
  const ReportBundle b = small_bundle();
  const std::string md = render_matrix_md(b, b.scalar_matrix);
  EXPECT_NE(md.find(" A "), std::string::npos);
  EXPECT_NE(md.find("| 1 "), std::string::npos);
  EXPECT_NE(md.find(" -- |"), std::string::npos);
}

TEST(Render, EmptyIvListIsRejected) {
  ReportBundle b;
  EXPECT_THROW(render(b, std::filesystem::temp_directory_path() / "pctcoef_empty"), Error);
  DesignMatrix dm;
  EXPECT_THROW(assemble_report(dm, FitResult{}, ReplicateSet{}, BootstrapConfig{}), Error);
}

TEST(Render, UnwritableDirectoryIsIoError) {
  const auto blocker = std::filesystem::temp_directory_path() / "pctcoef_blocker_file";
  std::ofstream(blocker) << "x";
  try {
    render(small_bundle(), blocker / "sub");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::io);
  }
  std::filesystem::remove(blocker);
}
