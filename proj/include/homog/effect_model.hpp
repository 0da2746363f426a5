#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "homog/errors.hpp"
#include "homog/expression.hpp"

namespace homog {

/// A positive-valued function of named variables, E(F) or R(M). Treated as a
/// black box by the homogeneity engine. Copies share the underlying callable.
class EffectModel {
 public:
  using Fn = std::function<double(std::span<const double>)>;

  EffectModel(std::vector<std::string> variables, Fn fn, std::string description = {})
      : variables_(std::move(variables)), fn_(std::move(fn)), description_(std::move(description)) {
    std::set<std::string> seen(variables_.begin(), variables_.end());
    if (seen.size() != variables_.size()) throw ConfigError("duplicate model variable name");
  }

  /// Builds a model from a DSL expression. Free variables of the expression
  /// must be exactly `variables` plus the keys of `parameters`, which are
  /// bound as constants.
  static EffectModel from_expression(const dsl::Expr& expr, std::vector<std::string> variables,
                                     const dsl::Bindings& parameters = {}) {
    const auto free = dsl::free_variables(expr);
    for (const auto& v : variables) {
      if (parameters.contains(v)) throw ConfigError("'" + v + "' is both a variable and a parameter");
      if (!free.contains(v)) throw ConfigError("unknown variable '" + v + "' (not in expression)");
    }
    for (const auto& [p, value] : parameters)
      if (!free.contains(p)) throw ConfigError("unknown parameter '" + p + "' (not in expression)");
    for (const auto& f : free) {
      if (!parameters.contains(f) && std::find(variables.begin(), variables.end(), f) == variables.end())
        throw ConfigError("expression references unbound name '" + f + "'");
    }

    std::vector<std::string> order = variables;
    std::vector<double> constants;
    for (const auto& [p, value] : parameters) {
      order.push_back(p);
      constants.push_back(value);
    }
    const std::size_t n = variables.size();
    dsl::CompiledExpr compiled(expr, order);
    Fn fn = [compiled = std::move(compiled), constants, n](std::span<const double> x) {
      if (constants.empty()) return compiled(x);
      std::vector<double> all(x.begin(), x.end());
      all.resize(n);
      all.insert(all.end(), constants.begin(), constants.end());
      return compiled(all);
    };
    return EffectModel(std::move(variables), std::move(fn), expr.to_string());
  }

  /// Variables in sorted order, parameters excluded.
  static EffectModel from_expression(const dsl::Expr& expr, const dsl::Bindings& parameters = {}) {
    std::vector<std::string> vars;
    for (const auto& f : dsl::free_variables(expr))
      if (!parameters.contains(f)) vars.push_back(f);
    return from_expression(expr, std::move(vars), parameters);
  }

  const std::vector<std::string>& variables() const noexcept { return variables_; }
  std::size_t arity() const noexcept { return variables_.size(); }
  const std::string& description() const noexcept { return description_; }

  std::optional<std::size_t> index_of(std::string_view name) const {
    auto it = std::find(variables_.begin(), variables_.end(), name);
    if (it == variables_.end()) return std::nullopt;
    return static_cast<std::size_t>(it - variables_.begin());
  }

  double operator()(std::span<const double> x) const {
    if (x.size() != variables_.size())
      throw DomainError("model expects " + std::to_string(variables_.size()) + " arguments, got " +
                        std::to_string(x.size()));
    return fn_(x);
  }

  double operator()(const std::map<std::string, double>& values) const {
    std::vector<double> x;
    x.reserve(variables_.size());
    for (const auto& v : variables_) {
      auto it = values.find(v);
      if (it == values.end()) throw ConfigError("missing value for variable '" + v + "'");
      x.push_back(it->second);
    }
    return fn_(x);
  }

 private:
  std::vector<std::string> variables_;
  Fn fn_;
  std::string description_;
};

}  // namespace homog
