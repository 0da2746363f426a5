#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "homog/expression.hpp"
#include "homog/models.hpp"

using namespace homog;
using namespace homog::models;

namespace {
std::vector<double> log_grid(double lo, double hi, int n) {
  std::vector<double> g;
  for (int i = 0; i < n; ++i) g.push_back(lo * std::pow(hi / lo, static_cast<double>(i) / (n - 1)));
  return g;
}
}  // namespace

TEST(Column, Values) {
  EXPECT_NEAR(column_effect(0.25), 0.25 / std::cos(std::numbers::pi / 4), 1e-15);
  EXPECT_NEAR(column_effect(0.25), 0.35355, 1e-5);
  EXPECT_NEAR(column_dh(0.25), 1.0 + std::numbers::pi / 8, 1e-15);
  EXPECT_NEAR(column_dh(0.25), 1.3927, 1e-4);
  EXPECT_NEAR(column_effect(1e-9) / 1e-9, 1.0, 1e-8);
  EXPECT_NEAR(column_dh(1e-9), 1.0, 1e-8);
  EXPECT_GT(column_effect(0.999), 1e3);
  EXPECT_TRUE(std::isfinite(column_effect(0.999)));
  EXPECT_THROW(column_effect(1.0), DomainError);
  EXPECT_THROW(column_effect(0.0), DomainError);
  EXPECT_THROW(column_dh(1.2), DomainError);
}

TEST(Column, DhAboveOneAndIncreasing) {
  double prev = 1.0;
  for (double r : log_grid(1e-4, 0.99, 200)) {
    EXPECT_GT(column_dh(r), prev);
    prev = column_dh(r);
  }
}

TEST(Tension, PeakAndBranches) {
  const auto p = tension_peak();
  EXPECT_NEAR(p.load_ratio, 1.729, 1e-3);
  EXPECT_NEAR(p.effect, 0.431, 1e-3);
  EXPECT_NEAR(tension_dh(p.load_ratio), 0.0, 1e-12);
  EXPECT_LT(tension_dh(4.0), 0.0);
  EXPECT_NEAR(tension_dh(1e-9), 1.0, 1e-8);
  for (double r : log_grid(1e-4, 50, 100)) {
    EXPECT_LT(tension_dh(r), 1.0);
    EXPECT_LE(tension_effect(r), p.effect + 1e-15);
  }
  EXPECT_GT(tension_dh(p.load_ratio * 0.999), 0.0);
  EXPECT_LT(tension_dh(p.load_ratio * 1.001), 0.0);
  EXPECT_THROW(tension_effect(0.0), DomainError);
}

TEST(Cable, UnitSag) {
  const double r = 2.0 * (std::sqrt(2.0) - 1.0) / std::sqrt(2.0);
  EXPECT_NEAR(r, 0.5858, 1e-4);
  EXPECT_NEAR(cable_load_of_sag(1.0), r, 1e-15);
  EXPECT_NEAR(cable_sag(r), 1.0, 1e-13);
  EXPECT_NEAR(cable_effect(r), std::sqrt(2.0) - 1.0, 1e-13);
}

TEST(Cable, SagSolvesRelation) {
  for (double r : log_grid(1e-9, 1e4, 80)) {
    const double u = cable_sag(r);
    EXPECT_NEAR(cable_load_of_sag(u), r, 1e-12 * r) << r;
  }
}

TEST(Cable, DhRange) {
  EXPECT_NEAR(cable_dh(1e-6), 2.0 / 3.0, 1e-3);
  double prev = 0.0;
  for (double r : log_grid(1e-6, 1e3, 100)) {
    const double n = cable_dh(r);
    EXPECT_GE(n, 2.0 / 3.0);
    EXPECT_LT(n, 1.0);
    EXPECT_GE(n, prev);
    prev = n;
  }
  EXPECT_GT(cable_dh(1e6), 0.999);
  EXPECT_THROW(cable_effect(0.0), DomainError);
}

TEST(Cable, DhMatchesSecantOfEffect) {
  // Independent of the chain-rule formula: log-log secant of the solved effect.
  for (double r : {1e-4, 0.01, 0.3, 2.0, 50.0}) {
    const double h = 1e-5;
    const double slope = (std::log(cable_effect(r * std::exp(h))) - std::log(cable_effect(r * std::exp(-h)))) / (2 * h);
    EXPECT_NEAR(slope, cable_dh(r), 1e-8) << r;
  }
}

TEST(Beam, CompressionPoint) {
  // n_P = 1 at 2 alpha / sin(2 alpha) = 3; locate by bisection on n_P.
  double lo = 0.3, hi = 0.8;
  for (int i = 0; i < 100; ++i) {
    const double mid = 0.5 * (lo + hi);
    (beam_two_actions(mid, BeamVariant::Compression).n_P < 1.0 ? lo : hi) = mid;
  }
  EXPECT_NEAR(lo, 0.526, 1e-3);
  const auto s = beam_two_actions(lo, BeamVariant::Compression);
  EXPECT_NEAR(s.n_E, 2.0, 5e-3);
  EXPECT_NEAR(s.v_G, 0.5, 5e-3);
  EXPECT_NEAR(s.v_P, 0.5, 5e-3);
}

TEST(Beam, IdentitiesAcrossDomain) {
  for (double r : log_grid(1e-4, 0.99, 60)) {
    const auto c = beam_two_actions(r, BeamVariant::Compression);
    EXPECT_NEAR(c.n_E, c.n_G + c.n_P, 1e-12);
    EXPECT_NEAR(c.v_G + c.v_P, 1.0, 1e-12);
    EXPECT_NEAR(c.v_G, c.n_G / c.n_E, 1e-12);
    EXPECT_GT(c.n_E, 1.0);
  }
  for (double r : log_grid(1e-4, 100, 60)) {
    const auto t = beam_two_actions(r, BeamVariant::Tension);
    EXPECT_NEAR(t.n_E, t.n_G + t.n_P, 1e-12);
    EXPECT_NEAR(t.v_G + t.v_P, 1.0, 1e-12);
    EXPECT_GT(t.n_E, 0.5);
    EXPECT_LT(t.n_E, 1.0);
    EXPECT_GT(t.n_P, -0.5);
    EXPECT_LT(t.n_P, 0.0);
  }
  EXPECT_THROW(beam_two_actions(1.0, BeamVariant::Compression), DomainError);
  EXPECT_THROW(beam_two_actions(-1.0, BeamVariant::Tension), DomainError);
}

TEST(ShearWall, Values) {
  const auto s = shear_wall(10, 2, 0.5);
  EXPECT_DOUBLE_EQ(s.effect, 12.5);
  EXPECT_DOUBLE_EQ(s.n_F1, 0.75);
  EXPECT_DOUBLE_EQ(s.n_F2, 0.25);
  EXPECT_EQ(s.n_E, 1.0);
  const auto z = shear_wall(7, 0, 0.3);
  EXPECT_EQ(z.n_F1, 1.0);
  EXPECT_EQ(z.n_F2, 0.0);
  EXPECT_EQ(z.effect, 7.0);
  EXPECT_THROW(shear_wall(2, 2, 0.5), DomainError);
  EXPECT_THROW(shear_wall(1, 2, 0.5), DomainError);
  EXPECT_THROW(shear_wall(1, 0.1, 0.0), DomainError);
}

TEST(ShearWall, PdhSumIsOne) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 1000; ++i) {
    const double a = 0.05 + u(rng), f1 = 0.1 + 100 * u(rng);
    const double f2 = 0.999 * u(rng) * f1 / (2 * a);
    const auto s = shear_wall(f1, f2, a);
    EXPECT_NEAR(s.n_F1 + s.n_F2, 1.0, 1e-12);
  }
}

TEST(Registry, IdsRoundTrip) {
  for (auto id : kAllBuiltins) {
    EXPECT_EQ(builtin_from_string(to_string(id)), id);
  }
  EXPECT_FALSE(builtin_from_string("bridge").has_value());
}

TEST(Registry, Parameters) {
  EXPECT_THROW(BuiltinModel::make(BuiltinId::MasonryShearWall), ConfigError);
  EXPECT_THROW(BuiltinModel::make(BuiltinId::ColumnBuckling, {{"a", 1.0}}), ConfigError);
  EXPECT_NO_THROW(BuiltinModel::make(BuiltinId::MasonryShearWall, {{"a", 0.5}}));
}

TEST(Registry, DslRenderingMatchesNative) {
  for (auto id : kAllBuiltins) {
    const auto m = BuiltinModel::make(id, id == BuiltinId::MasonryShearWall ? std::map<std::string, double>{{"a", 0.4}}
                                                                          : std::map<std::string, double>{});
    const auto src = m.dsl_expression();
    if (!src) {
      EXPECT_EQ(id, BuiltinId::CableLateral);
      continue;
    }
    const auto expr = dsl::parse(*src);
    const auto dsl_model = EffectModel::from_expression(expr, m.variables(), m.parameters);
    const auto native = m.effect_model();
    const double hi = id == BuiltinId::ColumnBuckling || id == BuiltinId::BeamTwoActionsCompression ? 0.95 : 20.0;
    for (double r : log_grid(1e-3, hi, 50)) {
      std::vector<double> x;
      if (m.variables().size() == 1) x = {r};
      else if (id == BuiltinId::MasonryShearWall) x = {10.0, r * 0.5};
      else x = {1.7, r};
      const double a = native(x), b = dsl_model(x);
      EXPECT_NEAR(a, b, 1e-12 * std::abs(a)) << to_string(id) << " at " << r;
    }
  }
}
