#include <gtest/gtest.h>

#include <cmath>

#include "lastexit/scale_functions.hpp"
#include "support/oracles.hpp"

using namespace lastexit;

namespace {

const LevyModel kBm = LevyModel::brownian_drift(1.0);
const LevyModel kBm2 = LevyModel::brownian_drift(0.3, 2.0);
const LevyModel kCl = LevyModel::cramer_lundberg(1.0, 2.0, 1.0);
const LevyModel kCl2 = LevyModel::cramer_lundberg(2.0, 1.0, 1.0);
const LevyModel kPcl = LevyModel::perturbed_cramer_lundberg(1.0, 0.5, 2.0, 1.0);
const LevyModel kStable = LevyModel::stable_drift(1.0, 1.5);

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

// Oracle Z(x, theta) by quadrature of the defining integral.
double z_by_quadrature(const ScaleEvaluator& ev, double x, double theta) {
  const double gap = ev.q() - psi(ev.model(), theta);
  const double integral =
      oracle::simpson([&](double y) { return std::exp(-theta * y) * ev.w(y); }, 0.0, x, 4000);
  return std::exp(theta * x) * (1.0 + gap * integral);
}

}  // namespace

TEST(ScaleFunctions, ClosedFormsMatchTextbook) {
  for (double q : {0.0, 0.5, 3.0})
    for (double x : {0.0, 1e-8, 0.3, 1.0, 5.0}) {
      EXPECT_LE(rel(ScaleEvaluator(kBm2, q).w(x), oracle::bm_w(0.3, 2.0, q, x)), 1e-12) << q << " " << x;
      EXPECT_LE(rel(ScaleEvaluator(kCl, q).w(x), oracle::cl_w(1.0, 2.0, 1.0, q, x)), 1e-12);
      EXPECT_LE(rel(ScaleEvaluator(kCl2, q).w(x), oracle::cl_w(2.0, 1.0, 1.0, q, x)), 1e-12);
    }
}

TEST(ScaleFunctions, ValuesAtAndBelowZero) {
  for (const auto& m : {kBm, kCl, kPcl, kStable}) {
    const ScaleEvaluator ev(m, 0.7);
    EXPECT_EQ(ev.w(-1.0), 0.0);
    EXPECT_EQ(ev.z(-1.0), 1.0);
    EXPECT_DOUBLE_EQ(ev.z(-1.0, 0.4), std::exp(-0.4));
  }
  EXPECT_NEAR(ScaleEvaluator(kCl, 0.7).w(0.0), 1.0, 1e-14);  // 1 / mu, bounded variation
  EXPECT_NEAR(ScaleEvaluator(kBm, 0.7).w(0.0), 0.0, 1e-14);
  EXPECT_NEAR(ScaleEvaluator(kStable, 0.7).w(1e-9), 0.0, 1e-3);
}

TEST(ScaleFunctions, LaplaceTransformAgainstSimpson) {
  for (const auto& m : {kBm, kBm2, kCl, kCl2, kPcl}) {
    for (double q : {0.0, 0.5, 2.0}) {
      const ScaleEvaluator ev(m, q);
      const double lambda = ev.phi() + 1.0;
      const double T = 40.0;
      const double num = oracle::simpson([&](double x) { return ev.w_discounted(x, lambda); }, 0.0, T, 20000);
      EXPECT_LE(rel(num, 1.0 / (psi(m, lambda) - q)), 1e-6) << describe(m) << " q=" << q;
    }
  }
}

TEST(ScaleFunctions, LaplaceTransformCheckAllFamilies) {
  for (const auto& m : {kBm, kCl, kPcl, kStable}) {
    const ScaleEvaluator ev(m, 0.5);
    for (double gap : {0.5, 2.0}) {
      const double lambda = ev.phi() + gap;
      EXPECT_LE(rel(laplace_transform_check(ev, lambda), 1.0 / (psi(m, lambda) - 0.5)), 1e-6) << describe(m);
    }
    EXPECT_THROW(laplace_transform_check(ev, ev.phi()), PreconditionError);
  }
}

TEST(ScaleFunctions, ZAtPhiIsExponential) {
  for (const auto& m : {kBm, kCl, kCl2, kPcl, kStable})
    for (double q : {0.1, 1.0, 4.0}) {
      const ScaleEvaluator ev(m, q);
      for (double x : {1e-7, 0.2, 1.0, 3.0})
        EXPECT_LE(rel(ev.z(x, ev.phi()), std::exp(ev.phi() * x)), 1e-10) << describe(m) << " x=" << x;
    }
}

TEST(ScaleFunctions, BromwichMatchesClosedForm) {
  for (const auto& m : {kBm, kCl, kCl2, kPcl}) {
    for (double q : {0.0, 0.5, 2.0}) {
      const ScaleEvaluator exact(m, q), inv(m, q, ScaleMethod::BromwichInversion);
      for (double x : {1e-3, 0.1, 0.5, 1.0, 2.0, 5.0, 10.0}) {
        const double scale = std::exp(exact.phi() * x);
        EXPECT_LE(std::abs(inv.w(x) - exact.w(x)) / std::max(1.0, scale) , 1e-7) << describe(m) << " " << q << " " << x;
        EXPECT_LE(std::abs(inv.z(x, 0.3) - exact.z(x, 0.3)) / std::max(1.0, scale), 1e-7);
        EXPECT_LE(std::abs(inv.z_dd(x, 0.3, 1.2) - exact.z_dd(x, 0.3, 1.2)) / std::max(1.0, scale), 1e-7);
        EXPECT_LE(std::abs(inv.conv(x, 0.7) - exact.conv(x, 0.7)) / std::max(1.0, scale), 1e-7);
      }
    }
  }
}

TEST(ScaleFunctions, ZAgainstQuadrature) {
  for (const auto& m : {kBm, kCl, kPcl}) {
    const ScaleEvaluator ev(m, 0.8);
    for (double x : {0.5, 2.0})
      for (double th : {0.0, 0.6, 2.5})
        EXPECT_LE(rel(ev.z(x, th), z_by_quadrature(ev, x, th)), 1e-8) << describe(m);
  }
}

TEST(ScaleFunctions, StableSmallXAsymptotics) {
  // 1/(l^a - mu l - q) = l^-a + mu l^{1-2a} + mu^2 l^{2-3a} + q l^{-2a} + ...
  const double a = 1.5, mu = 1.0, q = 0.5;
  const ScaleEvaluator ev(kStable, q);
  for (double x : {1e-9, 1e-7}) {
    const double series = std::pow(x, a - 1) / std::tgamma(a) + mu * std::pow(x, 2 * a - 2) / std::tgamma(2 * a - 1) +
                          mu * mu * std::pow(x, 3 * a - 3) / std::tgamma(3 * a - 2) +
                          q * std::pow(x, 2 * a - 1) / std::tgamma(2 * a);
    EXPECT_NEAR(ev.w(x) / series, 1.0, 1e-8) << x;
  }
  // the switch at kSmallX is continuous
  EXPECT_NEAR(ev.w(kSmallX * (1.0 - 1e-9)), ev.w(kSmallX * (1.0 + 1e-9)), 1e-9 * ev.w(kSmallX));
  EXPECT_NEAR(ev.z(kSmallX * (1.0 - 1e-9), 0.7), ev.z(kSmallX * (1.0 + 1e-9), 0.7), 1e-10);
}

TEST(ScaleFunctions, MethodSelection) {
  EXPECT_EQ(ScaleEvaluator(kStable, 1.0).method(), ScaleMethod::BromwichInversion);
  EXPECT_EQ(ScaleEvaluator(kPcl, 1.0).method(), ScaleMethod::SeriesExpansion);
  EXPECT_EQ(ScaleEvaluator(kCl, 1.0).method(), ScaleMethod::ClosedForm);
  EXPECT_THROW(ScaleEvaluator(kStable, 1.0, ScaleMethod::ClosedForm), ModelError);
  EXPECT_THROW(ScaleEvaluator(kStable, 1.0, ScaleMethod::SeriesExpansion), ModelError);
  EXPECT_THROW(ScaleEvaluator(kCl, -1.0), DomainError);
}

TEST(ScaleFunctionsProperty, WIncreasingAndNonNegative) {
  oracle::Gen g(31);
  for (const auto& m : {kBm, kCl, kCl2, kPcl, kStable}) {
    const ScaleEvaluator ev(m, g.uniform(0.0, 2.0));
    double prev = 0.0;
    for (double x = 0.05; x < 6.0; x += g.uniform(0.05, 0.5)) {
      const double v = ev.w(x);
      EXPECT_GE(v, prev) << describe(m) << " x=" << x;
      prev = v;
    }
  }
}

TEST(ScaleFunctionsProperty, ZDividedDifferenceConsistent) {
  oracle::Gen g(32);
  for (const auto& m : {kBm, kCl, kPcl, kStable}) {
    const ScaleEvaluator ev(m, 0.6);
    for (int i = 0; i < 10; ++i) {
      const double x = g.uniform(0.1, 3.0), a = g.uniform(0.0, 3.0), b = a + g.uniform(0.3, 2.0);
      const double quotient = (ev.z(x, a) - ev.z(x, b)) / (a - b);
      EXPECT_NEAR(ev.z_dd(x, a, b), quotient, 1e-8 * (1.0 + std::abs(quotient))) << describe(m);
    }
  }
}

TEST(ScaleFunctionsProperty, DerivativeOfZIsQW) {
  oracle::Gen g(33);
  for (const auto& m : {kBm, kCl, kPcl, kStable}) {
    const double q = g.uniform(0.2, 2.0);
    const ScaleEvaluator ev(m, q);
    for (int i = 0; i < 5; ++i) {
      const double x = g.uniform(0.5, 3.0), h = 1e-4;
      EXPECT_NEAR((ev.z(x + h) - ev.z(x - h)) / (2.0 * h), q * ev.w(x), 1e-6 * (1.0 + q * ev.w(x)));
    }
  }
}
