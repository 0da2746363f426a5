#pragma once

#include <cmath>
#include <numbers>
#include <string>
#include <string_view>

#include "homog/errors.hpp"

namespace homog {

inline constexpr double kEulerGamma = 0.57721566490153286061;

enum class DistKind { Normal, Lognormal, Gumbel };

inline std::string_view to_string(DistKind k) {
  switch (k) {
    case DistKind::Normal: return "normal";
    case DistKind::Lognormal: return "lognormal";
    case DistKind::Gumbel: return "gumbel";
  }
  return "?";
}

/// How the characteristic value of a variable is fixed: either a fractile of
/// its distribution or a plain multiple of the mean (for tabulated data that
/// quotes X_k / mean directly).
struct CharRule {
  enum class Kind { Percentile, MeanRatio };
  Kind kind = Kind::Percentile;
  double value = 0.5;

  static CharRule percentile(double p) { return {Kind::Percentile, p}; }
  static CharRule mean_ratio(double r) { return {Kind::MeanRatio, r}; }

  bool operator==(const CharRule&) const = default;
};

struct DistributionSpec {
  DistKind kind = DistKind::Lognormal;
  double mean = 1.0;
  double cov = 0.0;
  CharRule char_rule{};

  bool operator==(const DistributionSpec&) const = default;
};

inline void validate(const DistributionSpec& s) {
  if (!(s.mean > 0.0) || !std::isfinite(s.mean))
    throw DomainError("distribution mean must be positive and finite");
  if (!(s.cov >= 0.0) || !std::isfinite(s.cov))
    throw DomainError("distribution cov must be nonnegative and finite");
  if (s.char_rule.kind == CharRule::Kind::Percentile) {
    if (!(s.char_rule.value > 0.0 && s.char_rule.value < 1.0))
      throw DomainError("characteristic percentile must lie in (0,1)");
  } else if (!(s.char_rule.value > 0.0) || !std::isfinite(s.char_rule.value)) {
    throw DomainError("characteristic-to-mean ratio must be positive");
  }
}

// ---------------------------------------------------------------------------
// Standard normal

inline double std_normal_pdf(double x) {
  return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi);
}

inline double std_normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

/// Upper tail 1 - Phi(x) without cancellation.
inline double std_normal_sf(double x) { return 0.5 * std::erfc(x / std::numbers::sqrt2); }

namespace detail {

// Lower-tail inverse for 0 < p <= 0.5: Acklam's rational approximation
// (relative error ~1e-9) followed by one Halley step on erfc.
inline double normal_quantile_lower(double p) {
  static constexpr double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                 -2.759285104469687e+02, 1.383577518672690e+02,
                                 -3.066479806614716e+01, 2.506628277459239e+00};
  static constexpr double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                 -1.556989798598866e+02, 6.680131188771972e+01,
                                 -1.328068155288572e+01};
  static constexpr double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                 -2.400758277161838e+00, -2.549732539343734e+00,
                                 4.374664141464968e+00,  2.938163982698783e+00};
  static constexpr double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                                 2.445134137142996e+00, 3.754408661907416e+00};
  constexpr double p_low = 0.02425;

  double x;
  if (p < p_low) {
    const double q = std::sqrt(-2.0 * std::log(p));
    x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  } else {
    const double q = p - 0.5;
    const double r = q * q;
    x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
        (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
  }
  const double e = std_normal_cdf(x) - p;
  const double u = e * std::sqrt(2.0 * std::numbers::pi) * std::exp(0.5 * x * x);
  return x - u / (1.0 + 0.5 * x * u);
}

}  // namespace detail

inline double std_normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0))
    throw DomainError("normal quantile requires 0 < p < 1, got " + std::to_string(p));
  if (p == 0.5) return 0.0;
  if (p < 0.5) return detail::normal_quantile_lower(p);
  return -detail::normal_quantile_lower(1.0 - p);  // 1 - p is exact here
}

/// Standard deviation of ln X for a lognormal variable with coefficient of
/// variation `cov`; close to `cov` itself for small values.
inline double log_std(double cov) {
  if (!(cov >= 0.0)) throw DomainError("log_std requires cov >= 0");
  return std::sqrt(std::log1p(cov * cov));
}

// ---------------------------------------------------------------------------
// Parameterized distributions

/// A DistributionSpec with its native parameters resolved. Cheap to copy.
class Distribution {
 public:
  explicit Distribution(const DistributionSpec& spec) : spec_(spec) {
    validate(spec_);
    switch (spec_.kind) {
      case DistKind::Normal:
        a_ = spec_.mean;
        b_ = spec_.cov * spec_.mean;
        break;
      case DistKind::Lognormal:
        b_ = log_std(spec_.cov);
        a_ = std::log(spec_.mean) - 0.5 * b_ * b_;
        break;
      case DistKind::Gumbel:
        b_ = spec_.cov * spec_.mean * std::sqrt(6.0) / std::numbers::pi;
        a_ = spec_.mean - b_ * kEulerGamma;
        break;
    }
  }

  const DistributionSpec& spec() const noexcept { return spec_; }
  bool degenerate() const noexcept { return spec_.cov == 0.0; }

  /// Normal: mean; Lognormal: mean of ln X; Gumbel: location.
  double location() const noexcept { return a_; }
  /// Normal: standard deviation; Lognormal: Q; Gumbel: scale.
  double scale() const noexcept { return b_; }

  double pdf(double x) const {
    check_support(x);
    if (degenerate()) return 0.0;
    switch (spec_.kind) {
      case DistKind::Normal: return std_normal_pdf((x - a_) / b_) / b_;
      case DistKind::Lognormal: return std_normal_pdf((std::log(x) - a_) / b_) / (b_ * x);
      case DistKind::Gumbel: {
        const double z = (x - a_) / b_;
        return std::exp(-z - std::exp(-z)) / b_;
      }
    }
    return 0.0;
  }

  double cdf(double x) const {
    check_support(x);
    if (degenerate()) return x < spec_.mean ? 0.0 : 1.0;
    switch (spec_.kind) {
      case DistKind::Normal: return std_normal_cdf((x - a_) / b_);
      case DistKind::Lognormal: return std_normal_cdf((std::log(x) - a_) / b_);
      case DistKind::Gumbel: return std::exp(-std::exp(-(x - a_) / b_));
    }
    return 0.0;
  }

  /// 1 - cdf(x), evaluated directly in the upper tail.
  double sf(double x) const {
    check_support(x);
    if (degenerate()) return x < spec_.mean ? 1.0 : 0.0;
    switch (spec_.kind) {
      case DistKind::Normal: return std_normal_sf((x - a_) / b_);
      case DistKind::Lognormal: return std_normal_sf((std::log(x) - a_) / b_);
      case DistKind::Gumbel: return -std::expm1(-std::exp(-(x - a_) / b_));
    }
    return 0.0;
  }

  double quantile(double p) const {
    if (!(p > 0.0 && p < 1.0)) throw DomainError("quantile requires 0 < p < 1");
    if (degenerate()) return spec_.mean;
    switch (spec_.kind) {
      case DistKind::Normal: return a_ + b_ * std_normal_quantile(p);
      case DistKind::Lognormal: return std::exp(a_ + b_ * std_normal_quantile(p));
      case DistKind::Gumbel: return a_ - b_ * std::log(-std::log(p));
    }
    return 0.0;
  }

  /// Quantile at probability 1 - q, accurate when q is small.
  double quantile_upper(double q) const {
    if (!(q > 0.0 && q < 1.0)) throw DomainError("quantile requires 0 < q < 1");
    if (degenerate()) return spec_.mean;
    switch (spec_.kind) {
      case DistKind::Normal: return a_ - b_ * std_normal_quantile(q);
      case DistKind::Lognormal: return std::exp(a_ - b_ * std_normal_quantile(q));
      case DistKind::Gumbel: return a_ - b_ * std::log(-std::log1p(-q));
    }
    return 0.0;
  }

  /// Phi^-1(G(x)) using whichever tail keeps full relative precision.
  double normal_score(double x) const {
    if (spec_.kind == DistKind::Lognormal && !degenerate()) {
      check_support(x);
      return (std::log(x) - a_) / b_;
    }
    const double lower = cdf(x);
    if (lower <= 0.0) throw Error(ErrorCode::TailOverflow, "cdf underflows to 0 (lower tail)");
    if (lower < 0.5) return std_normal_quantile(lower);
    const double upper = sf(x);
    if (upper <= 0.0) throw Error(ErrorCode::TailOverflow, "cdf saturates at 1 (upper tail)");
    return -std_normal_quantile(upper);
  }

 private:
  void check_support(double x) const {
    if (!std::isfinite(x)) throw DomainError("non-finite argument");
    if (spec_.kind == DistKind::Lognormal && !(x > 0.0))
      throw DomainError("lognormal support is x > 0, got " + std::to_string(x));
  }

  DistributionSpec spec_;
  double a_ = 0.0;
  double b_ = 0.0;
};

struct DistFunctions {
  double pdf;
  double cdf;
  double quantile_inverse_check;  // quantile(cdf(x)); equals x up to round-off
};

inline DistFunctions dist_functions(const DistributionSpec& spec, double x) {
  const Distribution d(spec);
  const double c = d.cdf(x);
  double back = x;
  if (!d.degenerate()) back = c < 0.5 ? d.quantile(c) : d.quantile_upper(d.sf(x));
  return {d.pdf(x), c, back};
}

// ---------------------------------------------------------------------------
// Log-space statistics

struct CharacteristicValue {
  double value;  // X_k
  double k;      // standard-normal fractile of X_k under the variable's own law
};

inline CharacteristicValue characteristic_value(const DistributionSpec& spec) {
  const Distribution d(spec);
  if (spec.char_rule.kind == CharRule::Kind::Percentile) {
    const double p = spec.char_rule.value;
    return {d.quantile(p), std_normal_quantile(p)};
  }
  const double xk = spec.char_rule.value * spec.mean;
  if (d.degenerate()) {
    if (spec.char_rule.value != 1.0)
      throw Error(ErrorCode::Degenerate,
                  "characteristic ratio != 1 has no fractile for a zero-variance variable");
    return {xk, 0.0};
  }
  return {xk, d.normal_score(xk)};
}

struct LogSpaceStats {
  double q;           // sqrt(ln(1 + V^2))
  double k;           // Phi^-1(p), or the implied fractile for ratio rules
  double char_value;  // X_k
};

inline LogSpaceStats log_space_stats(const DistributionSpec& spec) {
  const auto ck = characteristic_value(spec);
  return {log_std(spec.cov), ck.k, ck.value};
}

/// Degree of homogeneity of the non-lognormality at x_d:
///   tau = Q * g(x_d) * x_d / phi(Phi^-1(G(x_d))).
/// The trailing x_d factor is read as multiplying the density; with that
/// reading tau is identically 1 for lognormal variables.
inline double tau_dhn(const DistributionSpec& spec, double x_d) {
  const Distribution d(spec);
  if (spec.kind == DistKind::Lognormal) {
    if (!(x_d > 0.0)) throw DomainError("lognormal support is x > 0");
    return 1.0;
  }
  if (d.degenerate()) return 1.0;
  const double z = d.normal_score(x_d);
  const double phi = std_normal_pdf(z);
  if (!(phi > 0.0)) throw Error(ErrorCode::TailOverflow, "normal density underflows at x_d");
  return log_std(spec.cov) * d.pdf(x_d) * x_d / phi;
}

}  // namespace homog
