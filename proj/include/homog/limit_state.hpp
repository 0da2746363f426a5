#pragma once

// Ratio-form limit state g = (R / R_d) / (E / E_d) * prod of free factors,
// built from declared basic variables and optional effect and resistance
// models. Model variables receive PDHs from the homogeneity engine at the
// design point; the rest keep their declared PDHs and enter g as power laws.

#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "homog/effect_model.hpp"
#include "homog/errors.hpp"
#include "homog/homogeneity.hpp"
#include "homog/oracle.hpp"
#include "homog/reliability.hpp"

namespace homog {

class LimitState {
 public:
  /// `pdh_given[i]` marks variables whose pdh was declared explicitly; that is
  /// a config error for model variables, whose PDH comes from the model.
  LimitState(std::vector<BasicVariable> vars, std::optional<EffectModel> effect,
             std::optional<EffectModel> resistance, std::vector<bool> pdh_given = {},
             const DiffOptions& diff = {})
      : vars_(std::move(vars)), effect_(std::move(effect)), resistance_(std::move(resistance)) {
    if (vars_.empty()) throw ConfigError("limit state needs at least one variable");
    pdh_given.resize(vars_.size(), false);
    side_.assign(vars_.size(), Side::Free);
    for (const auto& v : vars_) validate(v);
    for (std::size_t i = 0; i < vars_.size(); ++i)
      for (std::size_t j = 0; j < i; ++j)
        if (vars_[i].name == vars_[j].name) throw ConfigError("duplicate variable '" + vars_[i].name + "'");

    if (effect_) bind(*effect_, Side::Effect, Role::Action, effect_idx_);
    if (resistance_) bind(*resistance_, Side::Resistance, Role::ResistanceParameter, resistance_idx_);
    for (std::size_t i = 0; i < vars_.size(); ++i) {
      const auto& v = vars_[i];
      if (side_[i] == Side::Free) {
        if (effect_ && v.role == Role::Action)
          throw ConfigError("unknown variable '" + v.name + "': not a variable of the effect model");
        if (resistance_ && v.role == Role::ResistanceParameter)
          throw ConfigError("unknown variable '" + v.name + "': not a variable of the resistance model");
      } else if (pdh_given[i]) {
        throw ConfigError("variable '" + v.name + "' is a model variable; its pdh is computed, not declared");
      }
    }

    xd_.resize(vars_.size());
    for (std::size_t i = 0; i < vars_.size(); ++i) xd_[i] = design_value(vars_[i]);

    if (effect_) {
      effect_point_ = make_design_point(*effect_, gather(xd_, effect_idx_));
      orient(pdh_all(*effect_, *effect_point_, diff), effect_idx_, -1.0);
    }
    if (resistance_) {
      resistance_point_ = make_design_point(*resistance_, gather(xd_, resistance_idx_));
      orient(pdh_all(*resistance_, *resistance_point_, diff), resistance_idx_, +1.0);
    }
  }

  /// Variables with PDHs filled in, ready for reliability_index.
  const std::vector<BasicVariable>& variables() const noexcept { return vars_; }
  const std::vector<double>& design_values() const noexcept { return xd_; }
  const std::optional<EffectModel>& effect_model() const noexcept { return effect_; }
  const std::optional<DesignPoint>& effect_point() const noexcept { return effect_point_; }

  ReliabilityAssessment assessment() const { return reliability_index(vars_); }

  /// Coefficient of ln(X_i / X_d,i) in ln g for a free variable.
  double free_coefficient(std::size_t i) const {
    const double n = vars_[i].effective_pdh();
    return vars_[i].status == Status::Favourable ? n : -n;
  }

  /// g(x) for x aligned with variables(). Model domain errors and a
  /// nonpositive resistance count as failure; a nonpositive effect as safe.
  double operator()(std::span<const double> x) const {
    double log_g = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i)
      if (side_[i] == Side::Free) {
        const double c = free_coefficient(i);
        if (c != 0.0) log_g += c * std::log(x[i] / xd_[i]);
      }
    try {
      if (resistance_) {
        const double r = (*resistance_)(gather(x, resistance_idx_));
        if (!(r > 0.0)) return 0.0;
        log_g += std::log(r / resistance_point_->effect);
      }
      if (effect_) {
        const double e = (*effect_)(gather(x, effect_idx_));
        if (!(e > 0.0)) return std::numeric_limits<double>::infinity();
        log_g -= std::log(e / effect_point_->effect);
      }
    } catch (const Error& e) {
      if (e.code() == ErrorCode::Config) throw;
      return 0.0;
    }
    return std::exp(log_g);
  }

  LimitStateFn function() const {
    return [self = *this](std::span<const double> x) { return self(x); };
  }

 private:
  enum class Side { Free, Effect, Resistance };

  void bind(const EffectModel& m, Side side, Role role, std::vector<std::size_t>& idx) {
    for (const auto& name : m.variables()) {
      std::size_t found = vars_.size();
      for (std::size_t i = 0; i < vars_.size(); ++i)
        if (vars_[i].name == name) found = i;
      if (found == vars_.size()) throw ConfigError("missing variable '" + name + "' required by the model");
      if (side_[found] != Side::Free)
        throw ConfigError("variable '" + name + "' appears in both models");
      if (vars_[found].role != role)
        throw ConfigError("variable '" + name + "' must have role " + std::string(to_string(role)));
      side_[found] = side;
      idx.push_back(found);
    }
  }

  static std::vector<double> gather(std::span<const double> x, const std::vector<std::size_t>& idx) {
    std::vector<double> out;
    out.reserve(idx.size());
    for (auto i : idx) out.push_back(x[i]);
    return out;
  }

  // sign: -1 for effect models (g falls as E grows), +1 for resistance models.
  void orient(const std::vector<double>& n_model, const std::vector<std::size_t>& idx, double sign) {
    for (std::size_t k = 0; k < idx.size(); ++k) {
      auto& v = vars_[idx[k]];
      const double c = sign * n_model[k];
      v.pdh = v.status == Status::Favourable ? c : -c;
    }
  }

  std::vector<BasicVariable> vars_;
  std::optional<EffectModel> effect_;
  std::optional<EffectModel> resistance_;
  std::vector<Side> side_;
  std::vector<std::size_t> effect_idx_;
  std::vector<std::size_t> resistance_idx_;
  std::vector<double> xd_;
  std::optional<DesignPoint> effect_point_;
  std::optional<DesignPoint> resistance_point_;
};

/// Monomial limit state over the given variables using their declared PDHs.
inline LimitState monomial_limit_state(std::vector<BasicVariable> vars) {
  return LimitState(std::move(vars), std::nullopt, std::nullopt);
}

}  // namespace homog
