#pragma once

// JSON analysis configuration. Schema (all keys optional unless noted):
//
//   {
//     "model":      "column" | "<expression>" | {"builtin": id, "parameters": {...}}
//                   | {"expression": "...", "variables": [...], "parameters": {...}},
//     "resistance": same forms as "model",
//     "variables":  [{"name": str (required), "role": "action"|"resistance"|"model_error",
//                     "status": "favourable"|"unfavourable",
//                     "distribution": "lognormal"|"normal"|"gumbel",
//                     "mean": real, "cov": real,
//                     "percentile": real | "char_ratio": real,
//                     "psf": real, "pdh": real}],
//     "design_point": {"name": value, ...},
//     "target_beta":  real,
//     "options": {"step", "richardson", "midpoint_c", "clamp", "samples", "seed",
//                 "chunk_size", "tolerance"}
//   }
//
// A string model equal to a built-in id selects that model; any other string
// is parsed as an expression whose free variables (sorted) are the model
// variables. Unknown keys are rejected.

#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "homog/effect_model.hpp"
#include "homog/errors.hpp"
#include "homog/expression.hpp"
#include "homog/models.hpp"
#include "homog/reliability.hpp"

namespace homog {

struct ModelSpec {
  std::optional<models::BuiltinId> builtin;
  std::string expression;
  std::vector<std::string> variables;  // expression only; empty means sorted free variables
  std::map<std::string, double> parameters;

  EffectModel build() const {
    if (builtin) return models::BuiltinModel::make(*builtin, parameters).effect_model();
    const auto expr = dsl::parse(expression);
    if (variables.empty()) return EffectModel::from_expression(expr, parameters);
    return EffectModel::from_expression(expr, variables, parameters);
  }

  bool operator==(const ModelSpec&) const = default;
};

struct AnalysisOptions {
  double step = 1e-4;
  bool richardson = false;
  double midpoint_c = 0.5;
  bool clamp = true;
  std::uint64_t samples = 1'000'000;
  std::uint64_t seed = 1;
  std::uint64_t chunk_size = 65'536;
  double tolerance = 0.05;  // |beta_analytic - beta_MC| accepted by verify

  bool operator==(const AnalysisOptions&) const = default;
};

struct AnalysisConfig {
  std::optional<ModelSpec> model;
  std::optional<ModelSpec> resistance;
  std::vector<BasicVariable> variables;
  std::vector<bool> pdh_given;  // aligned with variables
  std::map<std::string, double> design_point;
  std::optional<double> target_beta;
  AnalysisOptions options;

  const BasicVariable* find(const std::string& name) const {
    for (const auto& v : variables)
      if (v.name == name) return &v;
    return nullptr;
  }
};

namespace detail {

using nlohmann::json;

inline void reject_unknown(const json& j, std::initializer_list<const char*> allowed,
                           const std::string& where) {
  for (const auto& [key, value] : j.items()) {
    bool ok = false;
    for (const char* a : allowed) ok = ok || key == a;
    if (!ok) throw ConfigError("unknown key '" + key + "' in " + where);
  }
}

inline double get_real(const json& j, const char* key, const std::string& where) {
  const auto& v = j.at(key);
  if (!v.is_number()) throw ConfigError("'" + std::string(key) + "' in " + where + " must be a number");
  return v.get<double>();
}

inline std::uint64_t get_count(const json& j, const char* key) {
  const auto& v = j.at(key);
  if (!v.is_number_integer() || v.get<std::int64_t>() <= 0)
    throw ConfigError("option '" + std::string(key) + "' must be a positive integer");
  return v.get<std::uint64_t>();
}

inline std::map<std::string, double> parse_real_map(const json& j, const std::string& where) {
  if (!j.is_object()) throw ConfigError(where + " must be an object of numbers");
  std::map<std::string, double> out;
  for (const auto& [k, v] : j.items()) {
    if (!v.is_number()) throw ConfigError(where + ": '" + k + "' must be a number");
    out[k] = v.get<double>();
  }
  return out;
}

inline ModelSpec parse_model(const json& j, const std::string& where) {
  ModelSpec m;
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (auto id = models::builtin_from_string(s)) m.builtin = id;
    else m.expression = s;
    return m;
  }
  if (!j.is_object()) throw ConfigError(where + " must be a string or an object");
  reject_unknown(j, {"builtin", "expression", "variables", "parameters"}, where);
  if (j.contains("builtin") == j.contains("expression"))
    throw ConfigError(where + " needs exactly one of 'builtin' or 'expression'");
  if (j.contains("builtin")) {
    const auto s = j.at("builtin").get<std::string>();
    m.builtin = models::builtin_from_string(s);
    if (!m.builtin) throw ConfigError("unknown builtin model '" + s + "'");
    if (j.contains("variables")) throw ConfigError(where + ": built-in models fix their variables");
  } else {
    m.expression = j.at("expression").get<std::string>();
    if (j.contains("variables")) m.variables = j.at("variables").get<std::vector<std::string>>();
  }
  if (j.contains("parameters")) m.parameters = parse_real_map(j.at("parameters"), where + " parameters");
  return m;
}

inline BasicVariable parse_variable(const json& j, bool& pdh_given) {
  if (!j.is_object() || !j.contains("name")) throw ConfigError("each variable needs a 'name'");
  BasicVariable v;
  v.name = j.at("name").get<std::string>();
  const std::string where = "variable '" + v.name + "'";
  reject_unknown(j,
                 {"name", "role", "status", "distribution", "mean", "cov", "percentile", "char_ratio",
                  "psf", "pdh"},
                 where);
  const std::string role = j.value("role", "action");
  if (role == "action") v.role = Role::Action;
  else if (role == "resistance") v.role = Role::ResistanceParameter;
  else if (role == "model_error") v.role = Role::ModelError;
  else throw ConfigError(where + ": unknown role '" + role + "'");

  v.status = v.role == Role::ResistanceParameter ? Status::Favourable : Status::Unfavourable;
  if (j.contains("status")) {
    const auto s = j.at("status").get<std::string>();
    if (s == "favourable") v.status = Status::Favourable;
    else if (s == "unfavourable") v.status = Status::Unfavourable;
    else throw ConfigError(where + ": unknown status '" + s + "'");
  }

  const std::string kind = j.value("distribution", "lognormal");
  if (kind == "lognormal") v.dist.kind = DistKind::Lognormal;
  else if (kind == "normal") v.dist.kind = DistKind::Normal;
  else if (kind == "gumbel") v.dist.kind = DistKind::Gumbel;
  else throw ConfigError(where + ": unknown distribution '" + kind + "'");

  if (!j.contains("mean")) throw ConfigError(where + " needs a 'mean'");
  v.dist.mean = get_real(j, "mean", where);
  v.dist.cov = j.contains("cov") ? get_real(j, "cov", where) : 0.0;
  if (j.contains("percentile") && j.contains("char_ratio"))
    throw ConfigError(where + ": give either 'percentile' or 'char_ratio', not both");
  if (j.contains("char_ratio")) v.dist.char_rule = CharRule::mean_ratio(get_real(j, "char_ratio", where));
  else if (j.contains("percentile")) v.dist.char_rule = CharRule::percentile(get_real(j, "percentile", where));
  else v.dist.char_rule = CharRule::percentile(0.5);

  if (j.contains("psf")) v.psf = get_real(j, "psf", where);
  pdh_given = j.contains("pdh");
  if (pdh_given) v.pdh = get_real(j, "pdh", where);
  try {
    validate(v);
  } catch (const Error& e) {
    throw ConfigError(e.what());
  }
  return v;
}

inline json model_to_json(const ModelSpec& m) {
  json j;
  if (m.builtin) j["builtin"] = std::string(models::to_string(*m.builtin));
  else j["expression"] = m.expression;
  if (!m.variables.empty()) j["variables"] = m.variables;
  if (!m.parameters.empty()) j["parameters"] = m.parameters;
  return j;
}

}  // namespace detail

inline AnalysisConfig parse_config(const nlohmann::json& j) {
  using detail::json;
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  try {
    detail::reject_unknown(j, {"model", "effect", "resistance", "variables", "design_point", "target_beta", "options"},
                           "config");
    if (j.contains("model") && j.contains("effect"))
      throw ConfigError("give either 'model' or its alias 'effect', not both");
    AnalysisConfig c;
    if (j.contains("model")) c.model = detail::parse_model(j.at("model"), "model");
    if (j.contains("effect")) c.model = detail::parse_model(j.at("effect"), "effect");
    if (j.contains("resistance")) c.resistance = detail::parse_model(j.at("resistance"), "resistance");
    if (j.contains("variables")) {
      std::set<std::string> seen;
      for (const auto& jv : j.at("variables")) {
        bool given = false;
        c.variables.push_back(detail::parse_variable(jv, given));
        c.pdh_given.push_back(given);
        if (!seen.insert(c.variables.back().name).second)
          throw ConfigError("duplicate variable '" + c.variables.back().name + "'");
      }
    }
    if (j.contains("design_point")) c.design_point = detail::parse_real_map(j.at("design_point"), "design_point");
    if (j.contains("target_beta")) c.target_beta = detail::get_real(j, "target_beta", "config");
    if (j.contains("options")) {
      const auto& o = j.at("options");
      detail::reject_unknown(
          o, {"step", "richardson", "midpoint_c", "clamp", "samples", "seed", "chunk_size", "tolerance"},
          "options");
      auto& opt = c.options;
      if (o.contains("step")) opt.step = detail::get_real(o, "step", "options");
      if (o.contains("richardson")) opt.richardson = o.at("richardson").get<bool>();
      if (o.contains("midpoint_c")) opt.midpoint_c = detail::get_real(o, "midpoint_c", "options");
      if (o.contains("clamp")) opt.clamp = o.at("clamp").get<bool>();
      if (o.contains("samples")) opt.samples = detail::get_count(o, "samples");
      if (o.contains("seed")) {
        if (!o.at("seed").is_number_unsigned()) throw ConfigError("option 'seed' must be a nonnegative integer");
        opt.seed = o.at("seed").get<std::uint64_t>();
      }
      if (o.contains("chunk_size")) opt.chunk_size = detail::get_count(o, "chunk_size");
      if (o.contains("tolerance")) opt.tolerance = detail::get_real(o, "tolerance", "options");
      if (!(opt.step > 0.0 && opt.step < 0.5)) throw ConfigError("option 'step' must lie in (0, 0.5)");
      if (!(opt.midpoint_c > 0.0 && opt.midpoint_c < 1.0))
        throw ConfigError("option 'midpoint_c' must lie in (0, 1)");
      if (!(opt.tolerance > 0.0)) throw ConfigError("option 'tolerance' must be positive");
    }
    return c;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("malformed config: ") + e.what());
  }
}

inline AnalysisConfig parse_config_text(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  return parse_config(j);
}

inline AnalysisConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str());
}

inline nlohmann::json to_json(const AnalysisConfig& c) {
  nlohmann::json j;
  if (c.model) j["model"] = detail::model_to_json(*c.model);
  if (c.resistance) j["resistance"] = detail::model_to_json(*c.resistance);
  if (!c.variables.empty()) {
    j["variables"] = nlohmann::json::array();
    for (std::size_t i = 0; i < c.variables.size(); ++i) {
      const auto& v = c.variables[i];
      nlohmann::json jv;
      jv["name"] = v.name;
      jv["role"] = std::string(to_string(v.role));
      jv["status"] = std::string(to_string(v.status));
      jv["distribution"] = std::string(to_string(v.dist.kind));
      jv["mean"] = v.dist.mean;
      jv["cov"] = v.dist.cov;
      if (v.dist.char_rule.kind == CharRule::Kind::Percentile) jv["percentile"] = v.dist.char_rule.value;
      else jv["char_ratio"] = v.dist.char_rule.value;
      jv["psf"] = v.psf;
      if (i < c.pdh_given.size() && c.pdh_given[i]) jv["pdh"] = v.pdh;
      j["variables"].push_back(jv);
    }
  }
  if (!c.design_point.empty()) j["design_point"] = c.design_point;
  if (c.target_beta) j["target_beta"] = *c.target_beta;
  const auto& o = c.options;
  j["options"] = {{"step", o.step},         {"richardson", o.richardson}, {"midpoint_c", o.midpoint_c},
                  {"clamp", o.clamp},       {"samples", o.samples},       {"seed", o.seed},
                  {"chunk_size", o.chunk_size}, {"tolerance", o.tolerance}};
  return j;
}

}  // namespace homog
