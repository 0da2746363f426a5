#pragma once

// Reliability index assembled from partial degrees of homogeneity, its
// nonlinearity-invariant bounds, critical partial safety factors, the relative
// sensitivity parameter (RSP) curve, kappa reduction factors and the
// comparison of three ways of placing the safety factors on a one-action,
// one-resistance system.

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "homog/distributions.hpp"
#include "homog/effect_model.hpp"
#include "homog/errors.hpp"
#include "homog/homogeneity.hpp"

namespace homog {

enum class Role { Action, ResistanceParameter, ModelError };
enum class Status { Favourable, Unfavourable };

inline std::string_view to_string(Role r) {
  switch (r) {
    case Role::Action: return "action";
    case Role::ResistanceParameter: return "resistance";
    case Role::ModelError: return "model_error";
  }
  return "?";
}

inline std::string_view to_string(Status s) {
  return s == Status::Favourable ? "favourable" : "unfavourable";
}

/// A basic variable in design-value format. Unfavourable: X_d = psf * X_k;
/// favourable: X_d = X_k / psf, with psf >= 1 either way. `pdh` is the
/// oriented sensitivity n_i in ln g = -sum n_i ln(X_i / X_d,i) read with the
/// favourable sign flip, so a strength in a linear resistance and a load in a
/// linear effect both carry n = +1. Model-error variables always have n = 1.
struct BasicVariable {
  std::string name;
  Role role = Role::Action;
  Status status = Status::Unfavourable;
  DistributionSpec dist{};
  double psf = 1.0;
  double pdh = 1.0;

  double effective_pdh() const { return role == Role::ModelError ? 1.0 : pdh; }
};

inline void validate(const BasicVariable& v) {
  validate(v.dist);
  if (!(v.psf >= 1.0) || !std::isfinite(v.psf))
    throw DomainError("variable '" + v.name + "': partial safety factor must be >= 1 and finite");
  if (!std::isfinite(v.pdh)) throw DomainError("variable '" + v.name + "': PDH must be finite");
}

inline double design_value(const BasicVariable& v) {
  validate(v);
  const double xk = characteristic_value(v.dist).value;
  return v.status == Status::Unfavourable ? v.psf * xk : xk / v.psf;
}

/// Partial reliability index: the index obtained when this variable alone
/// dominates the limit state. Lognormal: k + ln(psf)/Q with k oriented so
/// that a favourable 5% fractile contributes +1.645. Other laws: the exact
/// normal score of the design value, which is what the dominance limit
/// evaluates to and is independent of the model's nonlinearity.
inline double pri(const BasicVariable& v) {
  validate(v);
  const auto st = log_space_stats(v.dist);
  const double sign = v.status == Status::Unfavourable ? 1.0 : -1.0;
  if (v.dist.cov == 0.0) {
    if (v.psf != 1.0)
      throw Error(ErrorCode::Degenerate, "variable '" + v.name +
                                             "': zero variance with psf != 1 gives an infinite index");
    return sign * st.k;
  }
  if (v.dist.kind == DistKind::Lognormal) return sign * st.k + std::log(v.psf) / st.q;
  const Distribution d(v.dist);
  return sign * d.normal_score(design_value(v));
}

inline double tau(const BasicVariable& v) { return tau_dhn(v.dist, design_value(v)); }

struct ReliabilityAssessment {
  std::vector<std::string> names;
  std::vector<double> design_values;
  std::vector<double> pdh;
  std::vector<double> tau;
  std::vector<double> q;      // n_i * tau_i * Q_i
  std::vector<double> alpha;  // q / |q|
  std::vector<double> pri;
  double beta = 0.0;
  double beta_max = 0.0;  // |pri|
  double beta_min = 0.0;  // min(pri)
};

struct RiBounds {
  double beta_max;
  double beta_min;
};

/// Upper bound |beta| and lower bound min(beta_i). The bracket
/// min <= beta . alpha <= max holds for nonnegative alpha and beta_i.
inline RiBounds ri_bounds(std::span<const double> pri_values) {
  if (pri_values.empty()) throw DomainError("ri_bounds needs at least one PRI");
  double ss = 0.0;
  for (double b : pri_values) ss += b * b;
  return {std::sqrt(ss), *std::min_element(pri_values.begin(), pri_values.end())};
}

inline ReliabilityAssessment reliability_index(std::span<const BasicVariable> vars) {
  if (vars.empty()) throw DomainError("reliability index needs at least one variable");
  ReliabilityAssessment r;
  double qq = 0.0;
  for (const auto& v : vars) {
    r.names.push_back(v.name);
    r.design_values.push_back(design_value(v));
    r.pdh.push_back(v.effective_pdh());
    r.tau.push_back(tau_dhn(v.dist, r.design_values.back()));
    r.q.push_back(r.pdh.back() * r.tau.back() * log_std(v.dist.cov));
    r.pri.push_back(pri(v));
    qq += r.q.back() * r.q.back();
  }
  const double norm = std::sqrt(qq);
  if (!(norm > 0.0))
    throw Error(ErrorCode::Degenerate, "no sensitivity: every q_i = n_i tau_i Q_i is zero");
  double num = 0.0;
  for (std::size_t i = 0; i < r.q.size(); ++i) {
    r.alpha.push_back(r.q[i] / norm);
    num += r.q[i] * r.pri[i];
  }
  r.beta = num / norm;
  const auto b = ri_bounds(r.pri);
  r.beta_max = b.beta_max;
  r.beta_min = b.beta_min;
  return r;
}

// ---------------------------------------------------------------------------
// RSP curve for one action side and one resistance side

inline double ri_of_xi(double beta_R, double beta_F, double xi) {
  if (std::isinf(xi)) return xi > 0 ? beta_F : -beta_F;
  return (beta_R + xi * beta_F) / std::sqrt(1.0 + xi * xi);
}

struct RspPeak {
  double xi;    // beta_F / beta_R
  double beta;  // sqrt(beta_R^2 + beta_F^2)
};

inline RspPeak rsp_peak(double beta_R, double beta_F) {
  if (beta_R == 0.0) throw Error(ErrorCode::Degenerate, "RSP peak is at infinity for beta_R = 0");
  return {beta_F / beta_R, std::hypot(beta_R, beta_F)};
}

/// DH at which the RSP curve peaks: n = (beta_F/Q_F) / (beta_R/Q_R).
inline double peak_dh(double beta_R, double beta_F, double Q_R, double Q_F) {
  if (!(Q_R > 0.0 && Q_F > 0.0)) throw DomainError("peak DH needs Q_R, Q_F > 0");
  if (beta_R == 0.0) throw Error(ErrorCode::Degenerate, "peak DH is infinite for beta_R = 0");
  return (beta_F / Q_F) / (beta_R / Q_R);
}

struct XiCrossing {
  double xi_R;
  double xi_F;  // +inf when the curve stays above the target for all larger xi
  bool xi_F_unbounded = false;
};

/// RSP values where beta(xi) = beta_t; beta(xi) >= beta_t on [xi_R, xi_F].
inline XiCrossing xi_at_target(double beta_R, double beta_F, double beta_t) {
  const double bm = std::hypot(beta_R, beta_F);
  if (!(beta_t < bm))
    throw Error(ErrorCode::NoCrossing, "target " + std::to_string(beta_t) +
                                           " is not below the RSP peak " + std::to_string(bm));
  if (!(beta_t > 0.0)) throw DomainError("target reliability index must be positive");
  constexpr double inf = std::numeric_limits<double>::infinity();
  // (beta_t^2 - beta_F^2) xi^2 - 2 beta_R beta_F xi + (beta_t^2 - beta_R^2) = 0
  const double a = beta_t * beta_t - beta_F * beta_F;
  const double bh = -beta_R * beta_F;
  const double c = beta_t * beta_t - beta_R * beta_R;
  if (a == 0.0) {
    if (bh == 0.0) throw Error(ErrorCode::Degenerate, "RSP curve is flat at the target");
    return {-c / (2.0 * bh), inf, true};
  }
  const double disc = beta_t * std::sqrt(bm * bm - beta_t * beta_t);
  const double qv = -(bh + std::copysign(disc, bh == 0.0 ? 1.0 : bh));
  std::vector<double> roots;
  const double r1 = qv / a;
  const double r2 = qv != 0.0 ? c / qv : r1;
  for (double r : {r1, r2})
    if (beta_R + r * beta_F > 0.0) roots.push_back(r);
  std::sort(roots.begin(), roots.end());
  if (roots.empty()) throw Error(ErrorCode::NoCrossing, "no valid crossing of the RSP curve");
  if (roots.size() == 1) return {roots[0], inf, true};
  return {roots[0], roots[1], false};
}

struct KappaFactors {
  double kappa_R;
  double kappa_F;
};

/// Reduction factors for a target applied to beta_R = kappa_R beta_t and
/// beta_F = kappa_F beta_t such that beta(xi) = beta_t at both ends of
/// [xi_R, xi_F]. kappa_R is the square root of the closed-form ratio.
/// xi_F may be +inf.
inline KappaFactors kappa_factors(double xi_R, double xi_F) {
  if (!(xi_R >= 0.0) || !(xi_F >= xi_R) || std::isnan(xi_F) || std::isinf(xi_R))
    throw DomainError("kappa factors need 0 <= xi_R <= xi_F");
  const double a = std::sqrt(1.0 + xi_R * xi_R);
  double s = 1.0, t = 0.0;  // xi_F / sqrt(1 + xi_F^2), 1 / sqrt(1 + xi_F^2)
  if (!std::isinf(xi_F)) {
    const double h = std::sqrt(1.0 + xi_F * xi_F);
    s = xi_F / h;
    t = 1.0 / h;
  }
  const double kr = std::sqrt((a - s * xi_R + t) / (a + s * xi_R + t));
  return {kr, kr * (s * a + xi_R) / (t * a + 1.0)};
}

struct KappaEntry {
  double xi_R;
  double xi_F;
  KappaFactors kappa;
};

inline const std::vector<double>& kappa_grid() {
  static const std::vector<double> g{0.0, 0.2, 0.4, 0.6, 0.8, 1.0, 2.0,
                                     4.0, 6.0, 8.0, 10.0, std::numeric_limits<double>::infinity()};
  return g;
}

/// Every (xi_R, xi_F) pair of the standard grid with xi_R <= xi_F, xi_R finite.
inline std::vector<KappaEntry> kappa_table() {
  std::vector<KappaEntry> out;
  const auto& g = kappa_grid();
  for (double r : g) {
    if (std::isinf(r)) continue;
    for (double f : g)
      if (f >= r) out.push_back({r, f, kappa_factors(r, f)});
  }
  return out;
}

struct XiRange {
  double xi_R;
  double xi_F;
};

/// xi = n Q_F / Q_R at both ends of a DH range (linear lognormal resistance).
inline XiRange dh_range_to_xi(double n_low, double n_high, double Q_F, double Q_R) {
  if (!(Q_R > 0.0)) throw DomainError("dh_range_to_xi needs Q_R > 0");
  if (n_low > n_high) throw DomainError("dh_range_to_xi needs n_low <= n_high");
  return {n_low * Q_F / Q_R, n_high * Q_F / Q_R};
}

// ---------------------------------------------------------------------------
// Critical partial safety factors

/// The PSF that makes this variable's PRI equal beta_t. Rows by status and
/// law: unfavourable (actions and effect-side model errors) and favourable
/// (actions, strengths, resistance-side model errors); normal and lognormal
/// for both, Gumbel for unfavourable actions only. With `clamp`, values below
/// 1 are raised to 1.
inline double critical_psf(const BasicVariable& v, double beta_t, bool clamp = true) {
  validate(v.dist);
  if (!std::isfinite(beta_t)) throw DomainError("target reliability index must be finite");
  const double V = v.dist.cov;
  double g = 1.0;
  if (V > 0.0) {
    const double k = characteristic_value(v.dist).k;
    const bool unfav = v.status == Status::Unfavourable;
    switch (v.dist.kind) {
      case DistKind::Lognormal: {
        const double Q = log_std(V);
        g = std::exp(Q * (unfav ? beta_t - k : beta_t + k));
        break;
      }
      case DistKind::Normal: {
        const double num = unfav ? 1.0 + beta_t * V : 1.0 + k * V;
        const double den = unfav ? 1.0 + k * V : 1.0 - beta_t * V;
        if (!(den > 0.0) || !(num > 0.0))
          throw DomainError("critical PSF formula breaks down for the normal law: beta_t = " +
                            std::to_string(beta_t) + ", V = " + std::to_string(V));
        g = num / den;
        break;
      }
      case DistKind::Gumbel: {
        if (!unfav || v.role != Role::Action)
          throw Error(ErrorCode::Unsupported,
                      "no critical PSF row for a Gumbel variable that is not an unfavourable action");
        const double c = V * std::sqrt(6.0) / std::numbers::pi;
        // ln(-ln Phi(beta_t)) with Phi(beta_t) close to 1
        const double lt = std::log(-std::log1p(-std_normal_sf(beta_t)));
        const double lp = std::log(-std::log(std_normal_cdf(k)));
        const double num = 1.0 - c * (kEulerGamma + lt);
        const double den = 1.0 - c * (kEulerGamma + lp);
        if (!(den > 0.0) || !(num > 0.0))
          throw DomainError("critical PSF formula breaks down for the Gumbel law");
        g = num / den;
        break;
      }
    }
  }
  return clamp ? std::max(g, 1.0) : g;
}

// ---------------------------------------------------------------------------
// Safety-factor placement on a single action / single resistance system

struct OptionComparison {
  double beta_1;  // gamma_F on the action, gamma_R on the resistance
  double beta_2;  // gamma_F on the effect, i.e. gamma_R gamma_F on the resistance
  double beta_3;  // gamma_R gamma_F on the action
  double n_E;
};

/// `action` must be an unfavourable action that is the model's only variable;
/// `resistance` enters linearly. Its pdh field is ignored and the action's
/// pdh is replaced by the model's DH at F_d = gamma_F F_k, which is used for
/// all three options.
inline OptionComparison compare_op_up_options(const EffectModel& model, BasicVariable action,
                                              BasicVariable resistance, double gamma_F,
                                              double gamma_R, const DiffOptions& diff = {}) {
  if (model.arity() != 1) throw DomainError("option comparison needs a single-action model");
  if (action.status != Status::Unfavourable)
    throw DomainError("option comparison needs an unfavourable action");
  if (!(gamma_F >= 1.0 && gamma_R >= 1.0)) throw DomainError("safety factors must be >= 1");
  action.psf = gamma_F;
  const double fd = design_value(action);
  const auto point = make_design_point(model, {fd});
  const double n = dh_at(model, point, diff);
  action.pdh = n;
  resistance.pdh = 1.0;

  auto beta_with = [&](double gf, double gr) {
    action.psf = gf;
    resistance.psf = gr;
    const BasicVariable vs[] = {resistance, action};
    return reliability_index(vs).beta;
  };
  return {beta_with(gamma_F, gamma_R), beta_with(1.0, gamma_R * gamma_F),
          beta_with(gamma_R * gamma_F, 1.0), n};
}

}  // namespace homog
