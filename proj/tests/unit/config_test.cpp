#include <gtest/gtest.h>

#include "pctcoef/config.hpp"
#include "pctcoef/error.hpp"

using namespace pctcoef;

namespace {

const char* kConfig = R"({
  "data": "survey.csv",
  "output_dir": "results",
  "output_formats": ["md"],
  "variables": [
    {"name": "PSD", "role": "dependent", "kind": "ordinal", "conceptual_min": 1, "conceptual_max": 4},
    {"name": "AGE", "kind": "numeric", "conceptual_min": 0, "conceptual_max": 100},
    {"name": "INC", "kind": "ordinal", "conceptual_min": 1, "conceptual_max": 9, "missing_policy": "dummy_adjust"},
    {"name": "GEN", "kind": "binary"},
    {"name": "RAC", "kind": "nominal", "reference_rule": "highest_dv_mean"}
  ],
  "bootstrap": {"n_bootstrap": 500, "seed": 42, "ci_level": 0.9}
})";

ErrorKind kind_of(std::string_view text) {
  try {
    parse_run_config(text).validate();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no error for " << text;
  return ErrorKind::io;
}

}  // namespace

TEST(Config, ParsesFullDocument) {
  const RunConfig c = parse_run_config(kConfig, "/base");
  EXPECT_NO_THROW(c.validate());
  EXPECT_EQ(c.data_path, std::filesystem::path("/base/survey.csv"));
  EXPECT_EQ(c.output_dir, std::filesystem::path("/base/results"));
  EXPECT_TRUE(c.output_formats.markdown);
  EXPECT_FALSE(c.output_formats.csv);
  ASSERT_EQ(c.variables.size(), 5u);
  EXPECT_EQ(c.variables[0].role, Role::dependent);
  EXPECT_EQ(c.variables[0].conceptual_min, 1.0);
  EXPECT_EQ(c.variables[2].missing_policy, MissingPolicy::dummy_adjust);
  EXPECT_EQ(c.variables[3].kind, Kind::binary);
  EXPECT_EQ(c.variables[4].reference_rule, ReferenceRule::highest_dv_mean);
  EXPECT_EQ(c.bootstrap.n_bootstrap, 500u);
  EXPECT_EQ(c.bootstrap.seed, 42u);
  EXPECT_EQ(c.bootstrap.ci_level, 0.9);
}

TEST(Config, ExplicitReferenceGroupImpliesExplicitRule) {
  const RunConfig c = parse_run_config(R"({"variables": [
    {"name": "y", "role": "dependent", "conceptual_min": 0, "conceptual_max": 1},
    {"name": "g", "kind": "nominal", "reference_group": "b"}]})");
  EXPECT_EQ(c.variables[1].reference_rule, ReferenceRule::explicit_group);
  EXPECT_EQ(c.variables[1].reference_group, "b");
}

TEST(Config, TwoDependentVariablesNamed) {
  const RunConfig c = parse_run_config(R"({"variables": [
    {"name": "y1", "role": "dependent", "conceptual_min": 0, "conceptual_max": 1},
    {"name": "y2", "role": "dependent", "conceptual_min": 0, "conceptual_max": 1},
    {"name": "x", "conceptual_min": 0, "conceptual_max": 1}]})");
  try {
    c.validate();
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::schema);
    const std::string what = e.what();
    EXPECT_NE(what.find("y1"), std::string::npos);
    EXPECT_NE(what.find("y2"), std::string::npos);
  }
}

TEST(Config, SchemaErrors) {
  EXPECT_EQ(kind_of("not json"), ErrorKind::schema);
  EXPECT_EQ(kind_of("[]"), ErrorKind::schema);
  EXPECT_EQ(kind_of(R"({"variables": [{"name": "y", "role": "dependent"}]})"), ErrorKind::schema);
  EXPECT_EQ(kind_of(R"({"variables": [{"name": "y", "role": "dependent", "conceptual_min": 0, "conceptual_max": 1}]})"),
            ErrorKind::schema);
  EXPECT_EQ(kind_of(R"({"variables": [
    {"name": "y", "role": "dependent", "conceptual_min": 5, "conceptual_max": 5},
    {"name": "x", "conceptual_min": 0, "conceptual_max": 1}]})"),
            ErrorKind::schema);
  EXPECT_EQ(kind_of(R"({"variables": [
    {"name": "y", "role": "boss", "conceptual_min": 0, "conceptual_max": 1},
    {"name": "x", "conceptual_min": 0, "conceptual_max": 1}]})"),
            ErrorKind::schema);
  EXPECT_EQ(kind_of(R"({"variables": [
    {"name": "y", "role": "dependent", "conceptual_min": 0, "conceptual_max": 1},
    {"name": "x", "conceptual_min": 0, "conceptual_max": 1, "reference_rule": "lowest_dv_mean"}]})"),
            ErrorKind::schema);
  EXPECT_EQ(kind_of(R"({"variables": [
    {"name": "y", "role": "dependent", "conceptual_min": 0, "conceptual_max": 1},
    {"name": "x", "conceptual_min": 0, "conceptual_max": 1}],
    "bootstrap": {"n_bootstrap": 0}})"),
            ErrorKind::schema);
}

TEST(Config, Formats) {
  const RenderFormats both = parse_formats("md,csv");
  EXPECT_TRUE(both.markdown && both.csv);
  const RenderFormats csv = parse_formats("csv");
  EXPECT_TRUE(csv.csv && !csv.markdown);
  EXPECT_THROW(parse_formats("pdf"), Error);
}

TEST(Config, MissingFileIsAnError) {
  EXPECT_THROW(load_run_config("/nonexistent/pctcoef.json"), Error);
}
