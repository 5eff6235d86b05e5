#include "pctcoef/config.hpp"

#include <fmt/format.h>

#include <fstream>
#include <json.hpp>
#include <set>
#include <sstream>

#include "pctcoef/error.hpp"

namespace pctcoef {

using nlohmann::json;

void RunConfig::validate() const {
  std::set<std::string> names;
  std::vector<std::string> dependents;
  std::size_t independents = 0;
  for (const VariableSpec& v : variables) {
    v.validate();
    if (!names.insert(v.name).second)
      throw Error(ErrorKind::schema, fmt::format("variable '{}' declared twice", v.name));
    if (v.role == Role::dependent) dependents.push_back(v.name);
    if (v.role != Role::dependent) ++independents;
  }
  if (dependents.size() != 1)
    throw Error(ErrorKind::schema,
                dependents.empty()
                    ? std::string("config declares no dependent variable")
                    : fmt::format("config declares {} dependent variables: {}; exactly one is allowed",
                                  dependents.size(), fmt::join(dependents, ", ")));
  if (independents == 0) throw Error(ErrorKind::schema, "config declares no independent variables");
  bootstrap.validate();
}

namespace {

template <typename T>
T get_or(const json& obj, const char* key, T fallback) {
  const auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) return fallback;
  return it->get<T>();
}

VariableSpec parse_variable(const json& j) {
  if (!j.is_object()) throw Error(ErrorKind::schema, "each variable must be a JSON object");
  VariableSpec v;
  v.name = j.at("name").get<std::string>();
  v.role = parse_role(get_or<std::string>(j, "role", "independent"));
  v.kind = parse_kind(get_or<std::string>(j, "kind", "numeric"));
  if (v.kind == Kind::numeric || v.kind == Kind::ordinal) {
    if (!j.contains("conceptual_min") || !j.contains("conceptual_max"))
      throw Error(ErrorKind::schema,
                  fmt::format("variable '{}': conceptual_min and conceptual_max are required", v.name));
  }
  v.conceptual_min = get_or<double>(j, "conceptual_min", 0.0);
  v.conceptual_max = get_or<double>(j, "conceptual_max", 1.0);
  v.missing_policy = parse_missing_policy(get_or<std::string>(j, "missing_policy", "drop_row"));
  if (j.contains("reference_group")) v.reference_group = j.at("reference_group").get<std::string>();
  if (j.contains("reference_rule"))
    v.reference_rule = parse_reference_rule(j.at("reference_rule").get<std::string>());
  else if (v.reference_group)
    v.reference_rule = ReferenceRule::explicit_group;
  if (j.contains("missing_category")) v.missing_category = j.at("missing_category").get<std::string>();
  if (v.kind != Kind::nominal && j.contains("reference_rule"))
    throw Error(ErrorKind::schema,
                fmt::format("variable '{}': reference_rule applies to nominal variables only", v.name));
  return v;
}

std::filesystem::path resolve(const std::filesystem::path& p, const std::filesystem::path& base) {
  if (p.is_absolute() || base.empty()) return p;
  return base / p;
}

}  // namespace

RenderFormats parse_formats(std::string_view list) {
  RenderFormats f{false, false};
  std::size_t start = 0;
  while (start <= list.size()) {
    const std::size_t comma = std::min(list.find(',', start), list.size());
    const std::string_view item = list.substr(start, comma - start);
    if (item == "md" || item == "markdown") f.markdown = true;
    else if (item == "csv") f.csv = true;
    else throw Error(ErrorKind::schema, fmt::format("unknown output format '{}'", item));
    start = comma + 1;
  }
  return f;
}

RunConfig parse_run_config(std::string_view json_text, const std::filesystem::path& base_dir) {
  RunConfig cfg;
  try {
    const json doc = json::parse(json_text);
    if (!doc.is_object()) throw Error(ErrorKind::schema, "config must be a JSON object");
    if (doc.contains("data")) cfg.data_path = resolve(doc.at("data").get<std::string>(), base_dir);
    cfg.output_dir = resolve(get_or<std::string>(doc, "output_dir", "out"), base_dir);
    if (doc.contains("output_formats")) {
      std::vector<std::string> items = doc.at("output_formats").get<std::vector<std::string>>();
      std::string joined;
      for (const std::string& s : items) joined += (joined.empty() ? "" : ",") + s;
      cfg.output_formats = parse_formats(joined);
    }
    cfg.strict_anchors = get_or<bool>(doc, "strict_anchors", false);
    for (const json& v : doc.at("variables")) cfg.variables.push_back(parse_variable(v));
    if (doc.contains("bootstrap")) {
      const json& b = doc.at("bootstrap");
      cfg.bootstrap.n_bootstrap = get_or<std::size_t>(b, "n_bootstrap", cfg.bootstrap.n_bootstrap);
      cfg.bootstrap.seed = get_or<std::uint64_t>(b, "seed", cfg.bootstrap.seed);
      cfg.bootstrap.ci_level = get_or<double>(b, "ci_level", cfg.bootstrap.ci_level);
      cfg.bootstrap.alpha_levels = get_or<std::vector<double>>(b, "alpha_levels", cfg.bootstrap.alpha_levels);
    }
  } catch (const json::exception& e) {
    throw Error(ErrorKind::schema, fmt::format("invalid config: {}", e.what()));
  }
  return cfg;
}

RunConfig load_run_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::schema, fmt::format("cannot open config '{}'", path.string()));
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_run_config(buf.str(), path.parent_path());
}

}  // namespace pctcoef
