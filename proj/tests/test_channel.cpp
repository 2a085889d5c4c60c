#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "umzi/channel.hpp"

using namespace umzi;

namespace {

LinkBudget budget_with(double eta) { return LinkBudget{1.0, 1.0, eta, eta}; }

GainQber measure(double mean, double distance_km, double eta_bob = 0.045, double e_det = 0.033) {
  ChannelParams ch;
  ch.distance_km = distance_km;
  ch.eta_bob = eta_bob;
  ch.e_det = e_det;
  return overall_gain_and_qber(poisson_distribution(mean), make_link_budget(ch, 0.5), ch);
}

}  // namespace

TEST(FiberTransmittance, Values) {
  EXPECT_EQ(fiber_transmittance(0.21, 0.0), 1.0);
  EXPECT_EQ(fiber_transmittance(3.0, 0.0), 1.0);
  EXPECT_NEAR(fiber_transmittance(0.21, 50.0), 0.089125093813374553, 1e-17);
  EXPECT_NEAR(fiber_transmittance(0.21, 100.0), 0.0079432823472428150, 4e-18);
  EXPECT_THROW(fiber_transmittance(0.21, -1.0), Error);
  EXPECT_THROW(fiber_transmittance(0.0, 1.0), Error);
}

TEST(PassEfficiencyBob, Variants) {
  const InterferometerParams p{0.4, 0.067};
  EXPECT_NEAR(pass_efficiency_bob(p, false), 0.14346895074946467, 1e-16);
  EXPECT_NEAR(pass_efficiency_bob(p, true), 0.08375, 1e-16);
  EXPECT_EQ(pass_efficiency_bob({0.3, 0.3}, false), 0.5);
}

TEST(LinkBudget, ProductOfFactors) {
  ChannelParams ch;
  ch.distance_km = 37.5;
  const auto b = make_link_budget(ch, 0.2);
  EXPECT_NEAR(b.eta_total, b.fiber_transmittance * b.p_b * b.eta_bob, 1e-15);
  EXPECT_THROW(make_link_budget(ch, 1.5), Error);
}

TEST(YieldN, Values) {
  EXPECT_EQ(yield_n(0.5, 0.0, 0), 0.0);
  EXPECT_EQ(yield_n(0.5, 0.0, 2), 0.75);
  EXPECT_NEAR(yield_n(0.1, 1.7e-6, 1), 0.1000017, 1e-16);
  EXPECT_EQ(yield_n(1.0, 0.3, 4), 1.0);  // clamped
  EXPECT_EQ(yield_n(0.2, 1.7e-6, 0), 1.7e-6);
  EXPECT_THROW(yield_n(1.2, 0.0, 1), Error);
}

TEST(GainQber, Examples) {
  ChannelParams perfect;
  perfect.y0 = 0.0;
  perfect.e_det = 0.0;
  auto r = overall_gain_and_qber(poisson_distribution(0.467), budget_with(1.0), perfect);
  EXPECT_NEAR(r.gain, 0.37311990958762297, 1e-15);
  EXPECT_EQ(r.qber, 0.0);

  ChannelParams dark;
  r = overall_gain_and_qber(poisson_distribution(0.8), budget_with(0.0), dark);
  EXPECT_NEAR(r.gain, 1.7e-6, 1e-20);
  EXPECT_NEAR(r.qber, 0.5, 1e-15);

  ChannelParams gys;
  r = overall_gain_and_qber(poisson_distribution(0.467), budget_with(0.01), gys);
  EXPECT_NEAR(r.gain, 0.0046608125047944905, 1e-15);
  EXPECT_NEAR(r.qber, 0.033170335107705648, 1e-13);
}

TEST(GainQber, ZeroGainIsUndefined) {
  ChannelParams ch;
  ch.y0 = 0.0;
  try {
    overall_gain_and_qber(poisson_distribution(0.5), budget_with(0.0), ch);
    FAIL() << "expected undefined-qber";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::undefined_qber);
  }
}

TEST(GainQber, ClosedFormAgreementProperty) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> mean_dist(0.01, 2.0);
  std::uniform_real_distribution<double> log_eta(-6.0, 0.0);
  ChannelParams ch;
  for (int i = 0; i < 500; ++i) {
    const double s = mean_dist(rng);
    const double eta = std::pow(10.0, log_eta(rng));
    const auto r = overall_gain_and_qber(poisson_distribution(s), budget_with(eta), ch);
    const double signal = -std::expm1(-eta * s);
    EXPECT_NEAR(r.gain, ch.y0 + signal, 1e-10);
    EXPECT_NEAR(r.qber * r.gain, ch.e0 * ch.y0 + ch.e_det * signal, 1e-10);
  }
}

TEST(GainQber, Monotonicity) {
  double prev_gain = 2.0;
  double prev_qber = -1.0;
  for (double d = 0.0; d <= 300.0; d += 2.5) {
    const auto r = measure(0.467, d);
    EXPECT_LE(r.gain, prev_gain);
    EXPECT_GE(r.qber, prev_qber - 1e-15);
    EXPECT_GE(r.qber, 0.0);
    EXPECT_LE(r.qber, 0.5);
    prev_gain = r.gain;
    prev_qber = r.qber;
  }
  EXPECT_LE(measure(0.467, 40, 0.02).gain, measure(0.467, 40, 0.05).gain);
  EXPECT_LE(measure(0.3, 40).gain, measure(0.6, 40).gain);
  // e_det at the random-guess limit keeps E at exactly one half
  EXPECT_NEAR(measure(0.467, 10, 0.045, 0.5).qber, 0.5, 1e-15);
}
