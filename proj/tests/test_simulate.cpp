#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "lastexit/simulate.hpp"
#include "support/oracles.hpp"

using namespace lastexit;

TEST(ExitTracker, LinearPathCrossingDownThenUp) {
  ExitTracker tr(1.0);
  tr.segment(1.0, -1.0);  // crosses 0 at t = 0.5
  tr.segment(3.0, 1.0);   // crosses back at t = 2
  tr.segment(4.0, 2.0);
  const auto f = tr.finish(StopKind::Horizon);
  // above 0 at the horizon: T- is the horizon itself
  EXPECT_DOUBLE_EQ(f.t_minus, 4.0);
  EXPECT_EQ(f.x_at_t_minus, 2.0);
  EXPECT_DOUBLE_EQ(f.t_plus, 2.0);
  EXPECT_FALSE(f.event_plus_is_horizon);
  EXPECT_TRUE(f.event_minus_is_horizon);
  EXPECT_DOUBLE_EQ(f.occ_neg_before_t_plus, 1.5);
  EXPECT_DOUBLE_EQ(f.occ_pos_before_t_minus, 2.5);

  ExitTracker ends_below(1.0);
  ends_below.segment(1.0, -1.0);
  const auto g = ends_below.finish(StopKind::Horizon);
  EXPECT_DOUBLE_EQ(g.t_minus, 0.5);
  EXPECT_TRUE(g.crept_at_t_minus);
  EXPECT_EQ(g.x_at_t_minus, 0.0);
  EXPECT_FALSE(g.event_minus_is_horizon);
}

TEST(ExitTracker, JumpAcrossZeroRecordsUndershoot) {
  ExitTracker tr(0.5);
  tr.segment(1.0, 1.5);
  tr.jump(-0.7);
  tr.segment(2.0, -0.2);
  const auto f = tr.finish(StopKind::Horizon);
  EXPECT_DOUBLE_EQ(f.t_minus, 1.0);
  EXPECT_DOUBLE_EQ(f.x_at_t_minus, -0.7);
  EXPECT_FALSE(f.crept_at_t_minus);
  EXPECT_FALSE(f.event_minus_is_horizon);
  EXPECT_TRUE(f.event_plus_is_horizon);
  EXPECT_DOUBLE_EQ(f.t_plus, 2.0);
  EXPECT_DOUBLE_EQ(f.x_at_t_plus, -0.2);
  EXPECT_DOUBLE_EQ(f.occ_pos_before_t_minus, 1.0);
}

TEST(ExitTracker, EmptyLastExitSet) {
  ExitTracker below(-1.0);
  below.segment(1.0, -0.5);
  const auto f = below.finish(StopKind::Horizon);
  EXPECT_EQ(f.t_minus, 0.0);
  EXPECT_EQ(f.x_at_t_minus, -1.0);
  EXPECT_FALSE(f.crept_at_t_minus);
  // a Gaussian process started on the level leaves it continuously
  ExitTracker level(0.0, true);
  level.segment(1.0, -0.5);
  EXPECT_TRUE(level.finish(StopKind::BelowLevel).crept_at_t_minus);
  ExitTracker bv(0.0, false);
  bv.segment(1.0, -0.5);
  EXPECT_FALSE(bv.finish(StopKind::BelowLevel).crept_at_t_minus);
}

TEST(ExitTracker, HiddenExcursionMovesBothTimes) {
  ExitTracker tr(0.3);
  tr.segment(1.0, 0.2);
  tr.hidden_excursion(0.6);
  tr.segment(2.0, -0.4);
  const auto f = tr.finish(StopKind::Horizon);
  EXPECT_DOUBLE_EQ(f.t_plus, 2.0);
  EXPECT_TRUE(f.crept_at_t_minus);
  EXPECT_GT(f.t_minus, 1.0);  // the visible crossing after the excursion is later

  ExitTracker up(0.3);
  up.segment(1.0, 0.2);
  up.hidden_excursion(0.6);
  up.segment(2.0, 0.4);
  const auto g = up.finish(StopKind::Horizon);
  EXPECT_DOUBLE_EQ(g.t_plus, 0.6);
  EXPECT_TRUE(g.event_minus_is_horizon);
}

TEST(Simulate, StableIncrementsHaveExponentialMoments) {
  std::mt19937_64 rng(5);
  for (double alpha : {1.3, 1.5, 1.8}) {
    for (double l : {0.5, 1.0}) {
      const int n = 400000;
      double s = 0.0, s2 = 0.0;
      for (int i = 0; i < n; ++i) {
        const double v = std::exp(l * detail::stable_negative(rng, alpha));
        s += v;
        s2 += v * v;
      }
      const double mean = s / n, se = std::sqrt((s2 / n - mean * mean) / n);
      EXPECT_NEAR(mean, std::exp(std::pow(l, alpha)), 4.0 * se + 2e-3) << alpha << " " << l;
    }
  }
}

TEST(Simulate, DeterministicAcrossThreadCounts) {
  PathConfig c;
  c.model = LevyModel::cramer_lundberg(1.0, 2.0, 1.0);
  c.r = 0.5;
  const auto fns = std::vector<PathValue>{functionals::omega_minus_1({0.5, 0.5, 0.5, 0.5, 0.0}),
                                          functionals::discounted_t_plus(0.5)};
  const auto a = run_paths(c, 20000, 99, 1, fns);
  const auto b = run_paths(c, 20000, 99, 3, fns);
  for (std::size_t j = 0; j < fns.size(); ++j) {
    EXPECT_EQ(a[j].mean, b[j].mean);
    EXPECT_EQ(a[j].std_error, b[j].std_error);
  }
  c.model = LevyModel::stable_drift(1.0, 1.5);
  c.step = 1e-3;
  EXPECT_EQ(collect_paths(c, 5000, 4, 1, functionals::omega_minus_2({0.5, 0.5, 0.5, 0.5, 0.0})),
            collect_paths(c, 5000, 4, 2, functionals::omega_minus_2({0.5, 0.5, 0.5, 0.5, 0.0})));
}

TEST(Simulate, DifferentSeedsDiffer) {
  PathConfig c;
  c.model = LevyModel::brownian_drift(1.0);
  c.r = 0.5;
  c.step = 1e-2;
  const auto f = functionals::discounted_t_plus(0.5);
  EXPECT_NE(run_paths(c, 10000, 1, 1, {f})[0].mean, run_paths(c, 10000, 2, 1, {f})[0].mean);
}

TEST(Simulate, Preconditions) {
  const auto cl = LevyModel::cramer_lundberg(1.0, 2.0, 1.0);
  EXPECT_THROW(estimate_omega_minus(cl, {0.5, 0.5, 0.5, 0.5, 0.0}, 100, 1), PreconditionError);
  PathConfig c;
  c.model = cl;  // no horizon and no stop level
  EXPECT_THROW(sample_path(c), PreconditionError);
  EXPECT_THROW(estimate_T_plus_infinite(cl, 0.5, 10000, 1, 0.0), ModelError);
}

TEST(Simulate, CramerLundbergMatchesTransformsAtSmallN) {
  const auto cl = LevyModel::cramer_lundberg(1.0, 2.0, 1.0);
  const TransformQuery q{0.5, 0.5, 0.5, 0.5, 0.3};
  const auto [e1, e2] = estimate_omega_minus(cl, q, 50000, 17);
  EXPECT_NEAR(e1.mean, omega_minus_1(cl, q), 4.0 * e1.std_error);
  EXPECT_NEAR(e2.mean, omega_minus_2(cl, q), 4.0 * e2.std_error);
  const auto cl2 = LevyModel::cramer_lundberg(2.0, 1.0, 1.0);
  const auto [f1, f2] = estimate_omega_plus(cl2, q, 50000, 18);
  EXPECT_NEAR(f1.mean, omega_plus_1(cl2, q), 4.0 * f1.std_error);
  EXPECT_NEAR(f2.mean, omega_plus_2(cl2, q), 4.0 * f2.std_error);
  EXPECT_EQ(estimate_creeping(cl, 0.5, 0.5, 0.5, 10000, 1, 0.0).mean, 0.0);
}

TEST(Simulate, StableAndPerturbedRoughAgreement) {
  // coarse grids, so only a loose check that the samplers and formulas describe the same process
  SimOptions o;
  o.step = 1e-3;
  const TransformQuery q{0.5, 0.5, 0.5, 0.5, 0.5};
  for (const auto& m : {LevyModel::stable_drift(1.0, 1.5), LevyModel::perturbed_cramer_lundberg(1.0, 0.5, 2.0, 1.0)}) {
    const auto [e1, e2] = estimate_omega_minus(m, q, 20000, 23, o);
    EXPECT_NEAR(e1.mean, omega_minus_1(m, q), 4.0 * e1.std_error + 0.02) << describe(m);
    EXPECT_NEAR(e2.mean, omega_minus_2(m, q), 4.0 * e2.std_error + 0.02) << describe(m);
  }
}

TEST(Simulate, TruncationLevelMeetsBias) {
  const auto cl2 = LevyModel::cramer_lundberg(2.0, 1.0, 1.0);
  const double b = truncation_level_for(cl2, 1e-4);
  const ScaleEvaluator ev(cl2, 0.0);
  EXPECT_NEAR(1.0 - psi_prime_at_zero(cl2) * ev.w(b), 1e-4, 1e-9);
  EXPECT_NEAR(stop_level_for(LevyModel::cramer_lundberg(1.0, 2.0, 1.0), 1e-10), -std::log(1e-10), 1e-9);
}

TEST(Simulate, KolmogorovSmirnovDistance) {
  std::mt19937_64 rng(8);
  std::exponential_distribution<double> ex(1.0);
  std::vector<double> s(20000);
  for (auto& v : s) v = -ex(rng);
  auto exp_cdf = [](double x) { return x >= 0.0 ? 1.0 : std::exp(x); };
  EXPECT_LT(ks_distance(s, exp_cdf), 0.015);
  EXPECT_GT(ks_distance(s, [](double x) { return x >= 0.0 ? 1.0 : std::exp(2.0 * x); }), 0.1);
  EXPECT_THROW(ks_distance({}, exp_cdf), PreconditionError);
}
