#pragma once

// Closed-form nonlinear structural models with known degrees of homogeneity.
// Loads are normalized: load_ratio = P / P_E for the column, tension and beam
// models, and P / EA for the cable.

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "homog/effect_model.hpp"
#include "homog/errors.hpp"

namespace homog::models {

namespace detail {

inline double half_pi_sqrt(double load_ratio) {
  return 0.5 * std::numbers::pi * std::sqrt(load_ratio);
}

inline void require_open_unit(double load_ratio, const char* model) {
  if (!(load_ratio > 0.0 && load_ratio < 1.0))
    throw DomainError(std::string(model) + ": load_ratio must lie in (0,1), got " +
                      std::to_string(load_ratio));
}

inline void require_positive(double load_ratio, const char* model) {
  if (!(load_ratio > 0.0) || !std::isfinite(load_ratio))
    throw DomainError(std::string(model) + ": load_ratio must be positive, got " +
                      std::to_string(load_ratio));
}

// Bisection on a function that changes sign exactly once on [lo, hi].
template <class F>
double bisect(F&& f, double lo, double hi, double rel_tol) {
  double flo = f(lo);
  for (int i = 0; i < 400 && (hi - lo) > rel_tol * std::abs(hi); ++i) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if ((fm < 0.0) == (flo < 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Eccentrically compressed column (second-order elastic)

inline double column_effect(double load_ratio) {
  detail::require_open_unit(load_ratio, "column");
  return load_ratio / std::cos(detail::half_pi_sqrt(load_ratio));
}

inline double column_dh(double load_ratio) {
  detail::require_open_unit(load_ratio, "column");
  const double a = detail::half_pi_sqrt(load_ratio);
  return 1.0 + 0.5 * a * std::tan(a);
}

// ---------------------------------------------------------------------------
// Eccentric tension

inline double tension_effect(double load_ratio) {
  detail::require_positive(load_ratio, "eccentric_tension");
  return load_ratio / std::cosh(detail::half_pi_sqrt(load_ratio));
}

inline double tension_dh(double load_ratio) {
  detail::require_positive(load_ratio, "eccentric_tension");
  const double a = detail::half_pi_sqrt(load_ratio);
  return 1.0 - 0.5 * a * std::tanh(a);
}

struct TensionPeak {
  double load_ratio;
  double effect;
};

/// The unique maximum of the tension effect, where its DH crosses zero.
inline TensionPeak tension_peak() {
  // alpha * tanh(alpha) = 2 has its root in (1, 3).
  const double alpha =
      detail::bisect([](double a) { return a * std::tanh(a) - 2.0; }, 1.0, 3.0, 1e-15);
  const double r = std::pow(2.0 * alpha / std::numbers::pi, 2);
  return {r, tension_effect(r)};
}

// ---------------------------------------------------------------------------
// Taut cable with a midspan lateral load (large deformation, no pretension).
// With sag ratio u and w = sqrt(1 + u^2):
//   load_ratio = 2 u (w - 1) / w,   effect = N / EA = w - 1.

inline double cable_load_of_sag(double u) {
  const double w = std::hypot(1.0, u);
  const double strain = u * u / (w + 1.0);  // w - 1 without cancellation
  return 2.0 * u * strain / w;
}

inline double cable_sag(double load_ratio) {
  detail::require_positive(load_ratio, "cable");
  // load_ratio <= min(u^3, 2u) gives the lower end; the upper end is safe for
  // both the small-load (u^3) and large-load (2u) regimes.
  const double lo = std::max(std::cbrt(load_ratio), 0.5 * load_ratio);
  const double hi = 0.5 * load_ratio + 2.0 * std::cbrt(load_ratio) + 1.0;
  if (!(cable_load_of_sag(lo) <= load_ratio && cable_load_of_sag(hi) >= load_ratio))
    throw Error(ErrorCode::Numerical, "cable: sag root not bracketed");
  return detail::bisect([load_ratio](double u) { return cable_load_of_sag(u) - load_ratio; },
                        lo, hi, 1e-14);
}

inline double cable_effect(double load_ratio) {
  const double u = cable_sag(load_ratio);
  const double w = std::hypot(1.0, u);
  return u * u / (w + 1.0);
}

/// Chain rule through the sag parameter: n = w (w + 1) / (w^2 + w + 1).
inline double cable_dh(double load_ratio) {
  const double w = std::hypot(1.0, cable_sag(load_ratio));
  return w * (w + 1.0) / (w * w + w + 1.0);
}

// ---------------------------------------------------------------------------
// Beam with a transversal load G (applied first) and a normal force P.
// Effect is M_m / M_0 with M_0 from G alone.

enum class BeamVariant { Compression, Tension };

struct BeamState {
  double effect;
  double n_G;
  double n_P;
  double n_E;
  double v_G;
  double v_P;
};

inline BeamState beam_two_actions(double load_ratio, BeamVariant variant) {
  if (variant == BeamVariant::Compression) {
    detail::require_open_unit(load_ratio, "beam_compression");
  } else {
    detail::require_positive(load_ratio, "beam_tension");
  }
  const double a = detail::half_pi_sqrt(load_ratio);
  const double s2a = variant == BeamVariant::Compression ? std::sin(2.0 * a) : std::sinh(2.0 * a);
  const double ratio = 2.0 * a / s2a;
  BeamState st{};
  st.effect = variant == BeamVariant::Compression ? std::tan(a) / a : std::tanh(a) / a;
  st.n_G = 1.0;
  st.n_P = 0.5 * (ratio - 1.0);
  st.n_E = 0.5 * (1.0 + ratio);
  st.v_G = 2.0 * s2a / (2.0 * a + s2a);
  st.v_P = (2.0 * a - s2a) / (2.0 * a + s2a);
  return st;
}

// ---------------------------------------------------------------------------
// Masonry shear wall, rectangular stress block: vertical F1, horizontal F2,
// `a` the geometry ratio.

struct ShearWallState {
  double effect;
  double n_F1;
  double n_F2;
  double n_E;
  double v_F1;
  double v_F2;
};

inline ShearWallState shear_wall(double f1, double f2, double a) {
  if (!(f1 > 0.0) || !(f2 >= 0.0) || !(a > 0.0))
    throw DomainError("shear_wall: requires F1 > 0, F2 >= 0, a > 0");
  const double d = f1 - 2.0 * a * f2;
  if (!(d > 0.0)) throw DomainError("shear_wall: F1 <= 2 a F2, the stress block vanishes");
  ShearWallState st{};
  st.effect = f1 * f1 / d;
  st.n_F1 = (f1 - 4.0 * a * f2) / d;
  st.n_F2 = 2.0 * a * f2 / d;
  st.n_E = 1.0;
  st.v_F1 = st.n_F1;
  st.v_F2 = st.n_F2;
  return st;
}

// ---------------------------------------------------------------------------
// Registry

enum class BuiltinId {
  ColumnBuckling,
  EccentricTension,
  CableLateral,
  BeamTwoActionsCompression,
  BeamTwoActionsTension,
  MasonryShearWall,
};

inline constexpr BuiltinId kAllBuiltins[] = {
    BuiltinId::ColumnBuckling,           BuiltinId::EccentricTension,
    BuiltinId::CableLateral,             BuiltinId::BeamTwoActionsCompression,
    BuiltinId::BeamTwoActionsTension,    BuiltinId::MasonryShearWall};

inline std::string_view to_string(BuiltinId id) {
  switch (id) {
    case BuiltinId::ColumnBuckling: return "column";
    case BuiltinId::EccentricTension: return "eccentric_tension";
    case BuiltinId::CableLateral: return "cable";
    case BuiltinId::BeamTwoActionsCompression: return "beam_compression";
    case BuiltinId::BeamTwoActionsTension: return "beam_tension";
    case BuiltinId::MasonryShearWall: return "shear_wall";
  }
  return "?";
}

inline std::optional<BuiltinId> builtin_from_string(std::string_view s) {
  for (BuiltinId id : kAllBuiltins)
    if (to_string(id) == s) return id;
  return std::nullopt;
}

/// A built-in model plus its scalar parameters (`a` for the shear wall).
struct BuiltinModel {
  BuiltinId id;
  std::map<std::string, double> parameters;

  static BuiltinModel make(BuiltinId id, std::map<std::string, double> params = {}) {
    BuiltinModel m{id, std::move(params)};
    m.check_parameters();
    return m;
  }

  std::vector<std::string> parameter_names() const {
    if (id == BuiltinId::MasonryShearWall) return {"a"};
    return {};
  }

  std::vector<std::string> variables() const {
    switch (id) {
      case BuiltinId::BeamTwoActionsCompression:
      case BuiltinId::BeamTwoActionsTension: return {"G", "P"};
      case BuiltinId::MasonryShearWall: return {"F1", "F2"};
      default: return {"P"};
    }
  }

  void check_parameters() const {
    const auto names = parameter_names();
    for (const auto& [k, v] : parameters)
      if (std::find(names.begin(), names.end(), k) == names.end())
        throw ConfigError("unknown parameter '" + k + "' for model " + std::string(to_string(id)));
    for (const auto& n : names)
      if (!parameters.contains(n))
        throw ConfigError("missing parameter '" + n + "' for model " + std::string(to_string(id)));
  }

  double effect(std::span<const double> x) const {
    switch (id) {
      case BuiltinId::ColumnBuckling: return column_effect(x[0]);
      case BuiltinId::EccentricTension: return tension_effect(x[0]);
      case BuiltinId::CableLateral: return cable_effect(x[0]);
      case BuiltinId::BeamTwoActionsCompression:
        return positive_g(x[0]) * beam_two_actions(x[1], BeamVariant::Compression).effect;
      case BuiltinId::BeamTwoActionsTension:
        return positive_g(x[0]) * beam_two_actions(x[1], BeamVariant::Tension).effect;
      case BuiltinId::MasonryShearWall: return shear_wall(x[0], x[1], parameters.at("a")).effect;
    }
    return 0.0;
  }

  /// Closed-form PDHs aligned with variables().
  std::vector<double> closed_form_pdh(std::span<const double> x) const {
    switch (id) {
      case BuiltinId::ColumnBuckling: return {column_dh(x[0])};
      case BuiltinId::EccentricTension: return {tension_dh(x[0])};
      case BuiltinId::CableLateral: return {cable_dh(x[0])};
      case BuiltinId::BeamTwoActionsCompression: {
        positive_g(x[0]);
        const auto s = beam_two_actions(x[1], BeamVariant::Compression);
        return {s.n_G, s.n_P};
      }
      case BuiltinId::BeamTwoActionsTension: {
        positive_g(x[0]);
        const auto s = beam_two_actions(x[1], BeamVariant::Tension);
        return {s.n_G, s.n_P};
      }
      case BuiltinId::MasonryShearWall: {
        const auto s = shear_wall(x[0], x[1], parameters.at("a"));
        return {s.n_F1, s.n_F2};
      }
    }
    return {};
  }

  /// The model written in the expression language, when it has a closed form.
  std::optional<std::string> dsl_expression() const {
    const std::string alpha = "(1.5707963267948966*sqrt(P))";
    switch (id) {
      case BuiltinId::ColumnBuckling: return "P/cos" + alpha;
      case BuiltinId::EccentricTension: return "P/cosh" + alpha;
      case BuiltinId::CableLateral: return std::nullopt;
      case BuiltinId::BeamTwoActionsCompression: return "G*tan" + alpha + "/" + alpha;
      case BuiltinId::BeamTwoActionsTension: return "G*tanh" + alpha + "/" + alpha;
      case BuiltinId::MasonryShearWall: return "F1^2/(F1 - 2*a*F2)";
    }
    return std::nullopt;
  }

  EffectModel effect_model() const {
    check_parameters();
    BuiltinModel self = *this;
    return EffectModel(variables(), [self](std::span<const double> x) { return self.effect(x); },
                       std::string(to_string(id)));
  }

 private:
  static double positive_g(double g) {
    if (!(g > 0.0)) throw DomainError("beam: transversal load G must be positive");
    return g;
  }
};

}  // namespace homog::models
