#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

#include "homog/limit_state.hpp"
#include "homog/models.hpp"
#include "homog/oracle.hpp"

using namespace homog;

namespace {

BasicVariable lognormal(std::string name, Role role, Status st, double mean, double cov, double p, double psf,
                        double pdh = 1.0) {
  BasicVariable v;
  v.name = std::move(name);
  v.role = role;
  v.status = st;
  v.dist = {DistKind::Lognormal, mean, cov, CharRule::percentile(p)};
  v.psf = psf;
  v.pdh = pdh;
  return v;
}

}  // namespace

TEST(Philox, KnownAnswers) {
  using A4 = std::array<std::uint32_t, 4>;
  EXPECT_EQ(detail::philox4x32_10({0, 0, 0, 0}, {0, 0}), (A4{0x6627e8d5u, 0xe169c58du, 0xbc57ac4cu, 0x9b00dbd8u}));
  EXPECT_EQ(detail::philox4x32_10({0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu}, {0xffffffffu, 0xffffffffu}),
            (A4{0x408f276du, 0x41c83b0eu, 0xa20bc7c6u, 0x6d5451fdu}));
  EXPECT_EQ(detail::philox4x32_10({0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u}, {0xa4093822u, 0x299f31d0u}),
            (A4{0xd16cfe09u, 0x94fdccebu, 0x5001e420u, 0x24126ea1u}));
}

TEST(Uniform, RangeAndAddressing) {
  double sum = 0.0;
  for (std::uint64_t i = 0; i < 100000; ++i) {
    const double u = uniform(5, 2, 1, i);
    ASSERT_GT(u, 0.0);
    ASSERT_LT(u, 1.0);
    sum += u;
  }
  EXPECT_NEAR(sum / 100000, 0.5, 3 * std::sqrt(1.0 / 12 / 100000));
  EXPECT_EQ(uniform(5, 2, 1, 77), uniform(5, 2, 1, 77));
  EXPECT_NE(uniform(5, 2, 1, 77), uniform(5, 2, 0, 77));
  EXPECT_NE(uniform(5, 2, 1, 77), uniform(5, 3, 1, 77));
  EXPECT_NE(uniform(5, 2, 1, 77), uniform(6, 2, 1, 77));
}

TEST(Sampling, MomentsMatchSpec) {
  for (auto k : {DistKind::Normal, DistKind::Lognormal, DistKind::Gumbel}) {
    const DistributionSpec spec{k, 2.0, 0.2, CharRule::percentile(0.5)};
    const auto xs = sample_variable(spec, 200000, 11);
    const double m = std::accumulate(xs.begin(), xs.end(), 0.0) / xs.size();
    double ss = 0.0;
    for (double x : xs) ss += (x - m) * (x - m);
    const double sd = std::sqrt(ss / (xs.size() - 1));
    EXPECT_NEAR(m, 2.0, 4 * 0.4 / std::sqrt(200000.0)) << to_string(k);
    EXPECT_NEAR(sd, 0.4, 0.01) << to_string(k);
  }
}

TEST(Sampling, DegenerateIsConstant) {
  const auto xs = sample_variable({DistKind::Lognormal, 3.0, 0.0, CharRule::percentile(0.5)}, 10, 1);
  for (double x : xs) EXPECT_EQ(x, 3.0);
}

TEST(McConfig, Validation) {
  const BasicVariable vs[] = {lognormal("x", Role::Action, Status::Unfavourable, 1, 0.1, 0.5, 1)};
  const LimitStateFn g = [](std::span<const double>) { return 2.0; };
  EXPECT_THROW(mc_beta(g, vs, {0, 1, 10, 1}), ConfigError);
  EXPECT_THROW(mc_beta(g, vs, {100, 1, 1000, 1}), ConfigError);
  EXPECT_THROW(mc_beta(g, vs, {100, 1, 0, 1}), ConfigError);
}

TEST(Mc, SafeEverywhereIsFlaggedUnbounded) {
  const BasicVariable vs[] = {lognormal("x", Role::Action, Status::Unfavourable, 1, 0.1, 0.5, 1)};
  const auto r = mc_beta([](std::span<const double>) { return 2.0; }, vs, {100000, 1, 10000, 1});
  EXPECT_EQ(r.pf, 0.0);
  EXPECT_EQ(r.failures, 0u);
  EXPECT_TRUE(r.unbounded);
  EXPECT_TRUE(std::isnan(r.beta));
  EXPECT_NEAR(r.beta_bound, -std_normal_quantile(3e-5), 1e-12);

  const auto f = mc_beta([](std::span<const double>) { return 0.5; }, vs, {100000, 1, 10000, 1});
  EXPECT_EQ(f.pf, 1.0);
  EXPECT_TRUE(f.unbounded);
}

TEST(Mc, ResultStatistics) {
  const auto r = mc_result(1000, 1000000);
  EXPECT_EQ(r.pf, 1e-3);
  EXPECT_NEAR(r.beta, 3.090232306167813, 1e-12);
  EXPECT_NEAR(r.ci_halfwidth_beta, 1.96 * std::sqrt(1e-3 * (1 - 1e-3) / 1e6) / std_normal_pdf(r.beta), 1e-15);
  EXPECT_FALSE(r.unbounded);
}

TEST(Mc, ChunkOrderAndThreadCountDoNotMatter) {
  const BasicVariable vs[] = {lognormal("R", Role::ResistanceParameter, Status::Favourable, 1, 0.2, 0.05, 1.2),
                              lognormal("E", Role::Action, Status::Unfavourable, 1, 0.3, 0.95, 1.3)};
  const auto ls = monomial_limit_state({vs[0], vs[1]});
  const auto g = ls.function();
  McConfig cfg{200000, 42, 30000, 1};
  std::vector<Distribution> d{Distribution(vs[0].dist), Distribution(vs[1].dist)};
  std::uint64_t backwards = 0;
  for (std::uint64_t c = 7; c-- > 0;) backwards += mc_chunk_failures(g, d, cfg, c);
  const auto one = mc_beta(g, vs, cfg);
  cfg.threads = 3;
  const auto three = mc_beta(g, vs, cfg);
  EXPECT_EQ(one.failures, backwards);
  EXPECT_EQ(three.failures, backwards);
  cfg.seed = 43;
  EXPECT_NE(mc_beta(g, vs, cfg).failures, backwards);
}

TEST(Mc, ExceptionsPropagate) {
  const BasicVariable vs[] = {lognormal("x", Role::Action, Status::Unfavourable, 1, 0.1, 0.5, 1)};
  const LimitStateFn g = [](std::span<const double>) -> double { throw std::runtime_error("boom"); };
  EXPECT_THROW(mc_beta(g, vs, {20000, 1, 5000, 2}), std::runtime_error);
}

TEST(Mc, LinearLognormalAgreesWithIndex) {
  const std::vector<BasicVariable> vs{
      lognormal("R", Role::ResistanceParameter, Status::Favourable, 1, 0.15, 0.05, 1.1),
      lognormal("E", Role::Action, Status::Unfavourable, 1, 0.25, 0.95, 1.1)};
  const auto ls = monomial_limit_state(vs);
  const double beta = ls.assessment().beta;
  const auto mc = mc_beta(ls.function(), vs, {1000000, 7, 65536, 0});
  ASSERT_FALSE(mc.unbounded);
  EXPECT_LT(std::abs(mc.beta - beta), 0.05) << mc.beta << " vs " << beta;
  EXPECT_LT(std::abs(mc.beta - beta), 3 * mc.ci_halfwidth_beta);
}

TEST(Mc, HomogenizedColumnTracksSimulation) {
  auto P = lognormal("P", Role::Action, Status::Unfavourable, 0.25, 0.1, 0.95, 1.1);
  auto R = lognormal("R", Role::ResistanceParameter, Status::Favourable, 1, 0.1, 0.05, 1.0);
  const auto col = models::BuiltinModel::make(models::BuiltinId::ColumnBuckling).effect_model();
  const LimitState ls({R, P}, col, std::nullopt);
  EXPECT_GT(ls.variables()[1].pdh, 1.0);
  const double beta = ls.assessment().beta;
  const auto mc = mc_beta(ls.function(), ls.variables(), {1000000, 3, 65536, 0});
  ASSERT_FALSE(mc.unbounded);
  EXPECT_LT(std::abs(mc.beta - beta), 0.1) << mc.beta << " vs " << beta;
}
