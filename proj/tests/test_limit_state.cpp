#include <gtest/gtest.h>

#include <cmath>

#include "homog/limit_state.hpp"
#include "homog/models.hpp"

using namespace homog;

namespace {

BasicVariable make(std::string name, Role role, Status st, double mean = 1.0, double cov = 0.1, double p = 0.5,
                   double psf = 1.0) {
  BasicVariable v;
  v.name = std::move(name);
  v.role = role;
  v.status = st;
  v.dist = {DistKind::Lognormal, mean, cov, CharRule::percentile(p)};
  v.psf = psf;
  return v;
}

EffectModel shear_wall() {
  return models::BuiltinModel::make(models::BuiltinId::MasonryShearWall, {{"a", 0.5}}).effect_model();
}

}  // namespace

TEST(LimitState, ModelPdhsAreOriented) {
  // F1 = 10, F2 = 2 at the design point.
  auto f1 = make("F1", Role::Action, Status::Unfavourable, 10.0, 0.0);
  auto f2 = make("F2", Role::Action, Status::Favourable, 2.0, 0.0);
  auto r = make("R", Role::ResistanceParameter, Status::Favourable);
  const LimitState ls({r, f1, f2}, shear_wall(), std::nullopt);
  const auto& vs = ls.variables();
  EXPECT_NEAR(vs[1].pdh, 0.75, 1e-8);
  // A favourable action that raises the effect carries a negative oriented pdh.
  EXPECT_NEAR(vs[2].pdh, -0.25, 1e-8);
  EXPECT_EQ(vs[0].pdh, 1.0);
  EXPECT_NEAR(ls.effect_point()->effect, 12.5, 1e-12);
}

TEST(LimitState, EqualsOneAtDesignPoint) {
  auto p = make("P", Role::Action, Status::Unfavourable, 0.2, 0.1, 0.95, 1.5);
  auto r = make("R", Role::ResistanceParameter, Status::Favourable, 1.0, 0.1, 0.05, 1.2);
  auto th = make("theta", Role::ModelError, Status::Favourable, 1.0, 0.05, 0.5, 1.05);
  const auto col = models::BuiltinModel::make(models::BuiltinId::ColumnBuckling).effect_model();
  const LimitState ls({r, p, th}, col, std::nullopt);
  EXPECT_NEAR(ls(ls.design_values()), 1.0, 1e-14);
  auto x = ls.design_values();
  x[0] *= 1.1;
  EXPECT_NEAR(ls(x), 1.1, 1e-12);
  x[2] *= 1.1;
  EXPECT_NEAR(ls(x), 1.21, 1e-12);
  x = ls.design_values();
  x[1] *= 1.01;
  EXPECT_NEAR(ls(x), col(std::vector{ls.design_values()[1]}) / col(std::vector{x[1]}), 1e-12);
}

TEST(LimitState, ModelDomainCountsAsFailure) {
  auto p = make("P", Role::Action, Status::Unfavourable, 0.2, 0.1, 0.95, 1.5);
  auto r = make("R", Role::ResistanceParameter, Status::Favourable);
  const auto col = models::BuiltinModel::make(models::BuiltinId::ColumnBuckling).effect_model();
  const LimitState ls({r, p}, col, std::nullopt);
  const double x[] = {1.0, 1.5};
  EXPECT_EQ(ls(x), 0.0);
}

TEST(LimitState, ResistanceModel) {
  auto fc = make("fc", Role::ResistanceParameter, Status::Favourable, 30.0, 0.15, 0.05, 1.5);
  auto b = make("b", Role::ResistanceParameter, Status::Favourable, 0.3, 0.02, 0.05, 1.0);
  auto q = make("q", Role::Action, Status::Unfavourable, 1.0, 0.2, 0.95, 1.4);
  const auto res = EffectModel::from_expression(dsl::parse("fc*b^2"), std::map<std::string, double>{});
  const LimitState ls({fc, b, q}, std::nullopt, res);
  EXPECT_NEAR(ls.variables()[0].pdh, 1.0, 1e-8);
  EXPECT_NEAR(ls.variables()[1].pdh, 2.0, 1e-8);
  EXPECT_EQ(ls.variables()[2].pdh, 1.0);
  EXPECT_NEAR(ls(ls.design_values()), 1.0, 1e-14);
}

TEST(LimitState, ConfigErrors) {
  auto f1 = make("F1", Role::Action, Status::Unfavourable, 10.0);
  auto f2 = make("F2", Role::Action, Status::Unfavourable, 2.0);
  auto extra = make("W", Role::Action, Status::Unfavourable);
  auto r = make("R", Role::ResistanceParameter, Status::Favourable);
  auto expect_config = [](auto&& fn, const std::string& needle) {
    try {
      fn();
      FAIL() << "expected ConfigError containing " << needle;
    } catch (const ConfigError& e) {
      EXPECT_NE(std::string(e.what()).find(needle), std::string::npos) << e.what();
    }
  };
  expect_config([&] { LimitState({r, f1}, shear_wall(), std::nullopt); }, "missing variable 'F2'");
  expect_config([&] { LimitState({r, f1, f2, extra}, shear_wall(), std::nullopt); }, "unknown variable 'W'");
  expect_config([&] { LimitState({r, f1, f2, f2}, shear_wall(), std::nullopt); }, "duplicate");
  expect_config([&] { LimitState({r, f1, f2}, shear_wall(), std::nullopt, {false, true, false}); }, "pdh");
  auto wrong_role = f2;
  wrong_role.role = Role::ResistanceParameter;
  expect_config([&] { LimitState({r, f1, wrong_role}, shear_wall(), std::nullopt); }, "role");
  expect_config([&] { LimitState({}, std::nullopt, std::nullopt); }, "at least one");
}

TEST(LimitState, MonomialUsesDeclaredPdh) {
  auto a = make("a", Role::Action, Status::Unfavourable);
  a.pdh = 2.0;
  auto b = make("b", Role::ResistanceParameter, Status::Favourable);
  b.pdh = 0.5;
  const auto ls = monomial_limit_state({a, b});
  const double x[] = {2.0 * ls.design_values()[0], 4.0 * ls.design_values()[1]};
  EXPECT_NEAR(ls(x), std::pow(2.0, -2.0) * std::pow(4.0, 0.5), 1e-14);
  EXPECT_EQ(ls.free_coefficient(0), -2.0);
  EXPECT_EQ(ls.free_coefficient(1), 0.5);
}
