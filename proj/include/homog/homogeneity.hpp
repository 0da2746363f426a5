#pragma once

// Homogenization of a positive model at a design point: partial degrees of
// homogeneity (log-log slopes), their sum, relative weights, the power-law
// surrogate, the log-space remainder matrix and the propagation of partial
// safety factors through the model.

#include <cmath>
#include <cstdio>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "homog/effect_model.hpp"
#include "homog/errors.hpp"

namespace homog {

/// Values below this magnitude are reported as exactly zero: the variable
/// does not influence the effect at the point.
inline constexpr double kPdhZero = 1e-12;

struct DesignPoint {
  std::vector<double> values;  // aligned with the model's variables
  double effect = 0.0;         // model evaluated at `values`
};

namespace detail {

inline std::string describe_point(const EffectModel& m, std::span<const double> x) {
  std::string s = "(";
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (i) s += ", ";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.10g", x[i]);
    s += m.variables()[i] + "=" + buf;
  }
  return s + ")";
}

inline double log_effect(const EffectModel& m, std::span<const double> x) {
  double e = 0.0;
  try {
    e = m(x);
  } catch (const Error& err) {
    if (err.code() != ErrorCode::Domain && err.code() != ErrorCode::Evaluation) throw;
    throw Error(ErrorCode::HomogenizationDomain,
                std::string("model undefined at probe ") + describe_point(m, x) + ": " + err.what());
  }
  if (!(e > 0.0) || !std::isfinite(e))
    throw Error(ErrorCode::HomogenizationDomain,
                "nonpositive or non-finite effect " + std::to_string(e) + " at probe " +
                    describe_point(m, x));
  return std::log(e);
}

}  // namespace detail

inline DesignPoint make_design_point(const EffectModel& model, std::vector<double> values) {
  if (values.size() != model.arity())
    throw DomainError("design point has " + std::to_string(values.size()) + " values, model has " +
                      std::to_string(model.arity()) + " variables");
  for (std::size_t i = 0; i < values.size(); ++i)
    if (!(values[i] > 0.0) || !std::isfinite(values[i]))
      throw Error(ErrorCode::HomogenizationDomain,
                  "design value of '" + model.variables()[i] + "' must be positive");
  const double e = std::exp(detail::log_effect(model, values));
  return {std::move(values), e};
}

struct DiffOptions {
  double step = 1e-4;       // relative step s: probes at x * exp(+-s)
  bool richardson = false;  // one level of Richardson extrapolation
};

namespace detail {

inline double central_log_slope(const EffectModel& m, std::span<const double> x0,
                                std::optional<std::size_t> var, double s) {
  std::vector<double> up(x0.begin(), x0.end());
  std::vector<double> dn(x0.begin(), x0.end());
  const double fu = std::exp(s);
  const double fd = std::exp(-s);
  for (std::size_t i = 0; i < up.size(); ++i) {
    if (var && i != *var) continue;
    up[i] *= fu;
    dn[i] *= fd;
  }
  return (log_effect(m, up) - log_effect(m, dn)) / (2.0 * s);
}

inline double log_slope(const EffectModel& m, std::span<const double> x0,
                        std::optional<std::size_t> var, const DiffOptions& opt) {
  if (!(opt.step > 0.0)) throw DomainError("finite-difference step must be positive");
  double d = central_log_slope(m, x0, var, opt.step);
  if (opt.richardson) {
    const double half = central_log_slope(m, x0, var, 0.5 * opt.step);
    d = (4.0 * half - d) / 3.0;
  }
  return std::abs(d) < kPdhZero ? 0.0 : d;
}

}  // namespace detail

/// Partial degree of homogeneity of variable `var`: (x_i / E) dE/dx_i, taken
/// as a central difference of ln E against ln x_i.
inline double pdh_at(const EffectModel& model, const DesignPoint& point, std::size_t var,
                     const DiffOptions& opt = {}) {
  if (var >= model.arity()) throw DomainError("variable index out of range");
  return detail::log_slope(model, point.values, var, opt);
}

inline std::vector<double> pdh_all(const EffectModel& model, const DesignPoint& point,
                                   const DiffOptions& opt = {}) {
  std::vector<double> n(model.arity());
  for (std::size_t i = 0; i < n.size(); ++i) n[i] = pdh_at(model, point, i, opt);
  return n;
}

/// DH from scaling every variable together; an independent route to sum(pdh).
inline double radial_dh(const EffectModel& model, const DesignPoint& point,
                        const DiffOptions& opt = {}) {
  return detail::log_slope(model, point.values, std::nullopt, opt);
}

/// Tolerance for the radial-versus-sum cross-check. Both stencils carry
/// O(step^2) truncation error scaled by third log-derivatives, which grow
/// roughly like the cube of the slopes themselves.
inline double dh_crosscheck_tolerance(std::span<const double> pdh, const DiffOptions& opt) {
  double mag = 1.0;
  for (double n : pdh) mag += std::abs(n);
  const double s = opt.richardson ? 0.25 * opt.step * opt.step : opt.step;
  return 1e-8 + 10.0 * s * s * mag * mag * mag;
}

inline double dh_at(const EffectModel& model, const DesignPoint& point, const DiffOptions& opt = {}) {
  const auto n = pdh_all(model, point, opt);
  const double sum = std::accumulate(n.begin(), n.end(), 0.0);
  const double radial = radial_dh(model, point, opt);
  if (std::abs(radial - sum) > dh_crosscheck_tolerance(n, opt))
    throw Error(ErrorCode::Numerical, "DH cross-check failed: sum of PDHs " + std::to_string(sum) +
                                          " vs radial " + std::to_string(radial));
  return sum;
}

/// v_i = n_i / n_E.
inline std::vector<double> rpdh(std::span<const double> pdh) {
  const double dh = std::accumulate(pdh.begin(), pdh.end(), 0.0);
  if (std::abs(dh) < kPdhZero)
    throw Error(ErrorCode::Degenerate,
                "RPDH undefined: DH is zero (effect stationary under uniform scaling)");
  std::vector<double> v(pdh.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = pdh[i] / dh;
  return v;
}

// ---------------------------------------------------------------------------
// Secant estimators from characteristic and design values

/// ln[E(F_d) / E(F_d with variable `var` reset to F_k)] / ln(gamma_var), where
/// F_d = gamma * F_k componentwise. With one variable this is the plain
/// characteristic-to-design secant.
inline double pdh_ratio_estimate(const EffectModel& model, std::span<const double> characteristic,
                                 std::span<const double> psfs, std::size_t var) {
  if (characteristic.size() != model.arity() || psfs.size() != model.arity())
    throw DomainError("characteristic values and PSFs must match the model arity");
  if (var >= model.arity()) throw DomainError("variable index out of range");
  if (!(psfs[var] > 0.0) || psfs[var] == 1.0)
    throw Error(ErrorCode::Degenerate, "ratio estimate is indeterminate for gamma = 1");
  std::vector<double> design(characteristic.size());
  for (std::size_t i = 0; i < design.size(); ++i) design[i] = psfs[i] * characteristic[i];
  std::vector<double> mixed = design;
  mixed[var] = characteristic[var];
  return (detail::log_effect(model, design) - detail::log_effect(model, mixed)) /
         std::log(psfs[var]);
}

/// ln[E(gamma F) / E(F)] / ln(gamma).
inline double dh_ratio_estimate(const EffectModel& model, std::span<const double> values,
                                double gamma) {
  if (!(gamma > 0.0) || gamma == 1.0)
    throw Error(ErrorCode::Degenerate, "ratio estimate is indeterminate for gamma = 1");
  std::vector<double> scaled(values.begin(), values.end());
  for (double& v : scaled) v *= gamma;
  return (detail::log_effect(model, scaled) - detail::log_effect(model, values)) / std::log(gamma);
}

// ---------------------------------------------------------------------------
// Surrogate and remainder

/// E~(F) = E_d * prod (F_i / F_d,i)^n_i, globally homogeneous of degree sum(n).
inline EffectModel homogenized_surrogate(const EffectModel& model, const DesignPoint& point,
                                         std::vector<double> pdh) {
  if (pdh.size() != point.values.size()) throw DomainError("PDH vector does not match the point");
  const double ed = point.effect;
  std::vector<double> xd = point.values;
  return EffectModel(
      model.variables(),
      [ed, xd, pdh](std::span<const double> x) {
        double log_e = std::log(ed);
        for (std::size_t i = 0; i < x.size(); ++i) {
          if (!(x[i] > 0.0)) throw DomainError("surrogate requires positive inputs");
          log_e += pdh[i] * std::log(x[i] / xd[i]);
        }
        return std::exp(log_e);
      },
      "homogenized(" + model.description() + ")");
}

/// Dense row-major square matrix; just enough for the remainder Hessian.
struct SquareMatrix {
  std::size_t n = 0;
  std::vector<double> a;

  explicit SquareMatrix(std::size_t size) : n(size), a(size * size, 0.0) {}
  double& operator()(std::size_t i, std::size_t j) { return a[i * n + j]; }
  double operator()(std::size_t i, std::size_t j) const { return a[i * n + j]; }

  double frobenius() const {
    double s = 0.0;
    for (double v : a) s += v * v;
    return std::sqrt(s);
  }
};

struct RemainderOptions {
  double midpoint_c = 0.5;  // F_m = F_d * (F / F_d)^c
  double step = 1e-3;       // log-space step for second differences
};

/// H_ij = n_ij + n_i (delta_ij - n_j) at the intermediate point F_m, which is
/// the Hessian of ln E with respect to ln F there; it is evaluated directly by
/// second differences in log-space. `target` is the point F the expansion is
/// carried to; when omitted, F = F_d and F_m coincides with the design point.
inline SquareMatrix remainder_matrix(const EffectModel& model, const DesignPoint& point,
                                     std::optional<std::vector<double>> target = std::nullopt,
                                     const RemainderOptions& opt = {}) {
  if (!(opt.midpoint_c > 0.0 && opt.midpoint_c < 1.0))
    throw DomainError("remainder midpoint c must lie in (0,1)");
  const std::size_t n = model.arity();
  std::vector<double> fm = point.values;
  if (target) {
    if (target->size() != n) throw DomainError("target point does not match the model arity");
    for (std::size_t i = 0; i < n; ++i) {
      if (!((*target)[i] > 0.0)) throw DomainError("target point must be positive");
      fm[i] = point.values[i] * std::pow((*target)[i] / point.values[i], opt.midpoint_c);
    }
  }
  const double s = opt.step;
  auto e_at = [&](std::size_t i, int di, std::size_t j, int dj) {
    std::vector<double> x = fm;
    x[i] *= std::exp(di * s);
    x[j] *= std::exp(dj * s);
    return detail::log_effect(model, x);
  };
  const double e0 = detail::log_effect(model, fm);
  SquareMatrix h(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<double> up = fm, dn = fm;
    up[i] *= std::exp(s);
    dn[i] *= std::exp(-s);
    h(i, i) = (detail::log_effect(model, up) - 2.0 * e0 + detail::log_effect(model, dn)) / (s * s);
    for (std::size_t j = 0; j < i; ++j) {
      const double v =
          (e_at(i, 1, j, 1) - e_at(i, 1, j, -1) - e_at(i, -1, j, 1) + e_at(i, -1, j, -1)) /
          (4.0 * s * s);
      h(i, j) = v;
      h(j, i) = v;
    }
  }
  return h;
}

/// Frobenius norm of the remainder matrix; zero for exactly homogeneous
/// (power-law) models.
inline double remainder_metric(const EffectModel& model, const DesignPoint& point,
                               std::optional<std::vector<double>> target = std::nullopt,
                               const RemainderOptions& opt = {}) {
  return remainder_matrix(model, point, std::move(target), opt).frobenius();
}

// ---------------------------------------------------------------------------
// Safety factors

/// gamma_E = prod gamma_i^n_i (also gamma_R from the resistance-model PDHs).
inline double psf_effect(std::span<const double> pdh, std::span<const double> psfs) {
  if (pdh.size() != psfs.size()) throw DomainError("PDH and PSF vectors differ in length");
  double log_g = 0.0;
  for (std::size_t i = 0; i < pdh.size(); ++i) {
    if (!(psfs[i] > 0.0)) throw DomainError("partial safety factors must be positive");
    log_g += pdh[i] * std::log(psfs[i]);
  }
  return std::exp(log_g);
}

/// gamma_eq = prod gamma_i^v_i, the single factor on all variables that
/// reproduces gamma_E: gamma_eq^n_E = gamma_E.
inline double equivalent_psf(std::span<const double> pdh, std::span<const double> psfs) {
  const auto v = rpdh(pdh);
  return psf_effect(v, psfs);
}

// ---------------------------------------------------------------------------
// Full report

struct HomogeneityReport {
  std::vector<std::string> names;
  std::vector<double> design_values;
  double effect_at_point = 0.0;
  std::vector<double> pdh;
  double dh = 0.0;
  std::vector<double> rpdh;  // empty when dh == 0
  double gamma_effect = 1.0;
  std::optional<double> gamma_equivalent;
  double remainder_norm = 0.0;
};

struct AnalyzeOptions {
  DiffOptions diff{};
  RemainderOptions remainder{};
};

inline HomogeneityReport analyze(const EffectModel& model, const DesignPoint& point,
                                 std::span<const double> psfs, const AnalyzeOptions& opt = {}) {
  HomogeneityReport r;
  r.names = model.variables();
  r.design_values = point.values;
  r.effect_at_point = point.effect;
  r.pdh = pdh_all(model, point, opt.diff);
  r.dh = dh_at(model, point, opt.diff);
  if (std::abs(r.dh) >= kPdhZero) r.rpdh = rpdh(r.pdh);
  r.gamma_effect = psf_effect(r.pdh, psfs);
  if (!r.rpdh.empty()) r.gamma_equivalent = psf_effect(r.rpdh, psfs);
  r.remainder_norm = remainder_metric(model, point, std::nullopt, opt.remainder);
  return r;
}

}  // namespace homog
