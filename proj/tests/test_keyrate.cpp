#include <bit>
#include <cmath>
#include <cstdint>
#include <random>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "umzi/keyrate.hpp"

using namespace umzi;

namespace {

constexpr InterferometerParams kPaper{0.4, 0.067};

oracle::Kind oracle_kind(Scenario s) {
  switch (s) {
    case Scenario::IdealPM: return oracle::Kind::ideal;
    case Scenario::VirtualSource: return oracle::Kind::virtual_source;
    case Scenario::NaiveEveAttenuator: return oracle::Kind::naive;
    case Scenario::ActiveCompensation: return oracle::Kind::compensated;
  }
  return oracle::Kind::ideal;
}

ChannelParams at(double km) {
  ChannelParams ch;
  ch.distance_km = km;
  return ch;
}

}  // namespace

TEST(BinaryEntropy, Values) {
  EXPECT_EQ(binary_entropy(0.0), 0.0);
  EXPECT_EQ(binary_entropy(1.0), 0.0);
  EXPECT_EQ(binary_entropy(0.5), 1.0);
  EXPECT_NEAR(binary_entropy(0.11), 0.49991595816452800, 1e-15);
  EXPECT_THROW(binary_entropy(-0.01), Error);
  EXPECT_THROW(binary_entropy(1.01), Error);
}

TEST(BinaryEntropy, SymmetricAndConcave) {
  for (int i = 1; i < 1000; ++i) {
    const double x = i / 1000.0;
    EXPECT_NEAR(binary_entropy(x), binary_entropy(1.0 - x), 1e-12);
    if (i > 1 && i < 999) {
      const double h = 1e-3;
      EXPECT_GE(binary_entropy(x), 0.5 * (binary_entropy(x - h) + binary_entropy(x + h)));
    }
  }
}

TEST(DetectorFreeBounds, Naive) {
  EXPECT_NEAR(naive_single_photon_rate(kPaper, 1.0), 0.030105040595853847, 1e-17);
  EXPECT_EQ(naive_single_photon_rate({0.4, 0.0}, 0.3), 0.0);
  EXPECT_NEAR(naive_single_photon_rate(kPaper, 0.1), 0.0030105040595853847, 1e-18);
}

TEST(DetectorFreeBounds, Virtual) {
  EXPECT_NEAR(virtual_single_photon_rate(kPaper, 1.0), 0.042000966057629261, 1e-17);
  EXPECT_NEAR(virtual_single_photon_rate(kPaper, 1.0) / naive_single_photon_rate(kPaper, 1.0), 1.3951472984698036,
              1e-14);
  for (double mu : {0.05, 0.4, 0.77}) {
    for (double t : {1.0, 0.3, 1e-4}) {
      EXPECT_EQ(virtual_single_photon_rate({mu, mu}, t), naive_single_photon_rate({mu, mu}, t));
    }
  }
}

TEST(DetectorFreeBounds, CompensationIsBitwiseNaive) {
  EXPECT_NEAR(compensated_single_photon_rate(kPaper, 1.0), 0.030105040595853847, 1e-17);
  EXPECT_NEAR(compensated_single_photon_rate({0.4, 0.4}, 1.0), 0.17973158564688864, 1e-16);
  oracle::ParamSampler sample(21);
  std::mt19937_64 rng(22);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int i = 0; i < 1000; ++i) {
    const auto [mu, nu] = sample();
    const double t = unit(rng);
    EXPECT_EQ(std::bit_cast<std::uint64_t>(compensated_single_photon_rate({mu, nu}, t)),
              std::bit_cast<std::uint64_t>(naive_single_photon_rate({mu, nu}, t)));
  }
}

TEST(ImprovementFactor, Values) {
  EXPECT_EQ(improvement_factor({0.4, 0.4}), 1.0);
  EXPECT_NEAR(improvement_factor(kPaper), 1.3951472984698036, 1e-15);
  EXPECT_NEAR(improvement_factor({1.0, 0.5}), 1.6487212707001282, 1e-15);
  oracle::ParamSampler sample(8);
  for (int i = 0; i < 300; ++i) {
    const auto [mu, nu] = sample();
    if (nu == 0.0) continue;
    const double ratio = virtual_single_photon_rate({mu, nu}, 0.5) / naive_single_photon_rate({mu, nu}, 0.5);
    EXPECT_NEAR(ratio / improvement_factor({mu, nu}), 1.0, 1e-12);
  }
}

TEST(IdealDecoyBounds, Values) {
  ChannelParams ch;
  auto b = ideal_decoy_bounds(0.0, ch);
  EXPECT_EQ(b.y1, 1.7e-6);
  EXPECT_EQ(b.e1, 0.5);

  ChannelParams clean;
  clean.y0 = 0.0;
  b = ideal_decoy_bounds(1.0, clean);
  EXPECT_EQ(b.y1, 1.0);
  EXPECT_EQ(b.e1, 0.033);

  b = ideal_decoy_bounds(0.01, ch);
  EXPECT_NEAR(b.e1, 0.033079376505993981, 1e-16);

  EXPECT_THROW(ideal_decoy_bounds(0.0, clean), Error);
}

TEST(SecureKeyRate, MatchesClosedFormOracle) {
  oracle::ParamSampler sample(99);
  std::mt19937_64 rng(100);
  std::uniform_real_distribution<double> dist(0.0, 150.0);
  for (int i = 0; i < 200; ++i) {
    const auto [mu, nu] = sample(1.0);
    if (nu < 1e-3) continue;
    const double d = dist(rng);
    for (Scenario s : all_scenarios) {
      const auto r = secure_key_rate(s, {mu, nu}, at(d));
      const double ref = static_cast<double>(oracle::rate(oracle_kind(s), mu, nu, d));
      EXPECT_NEAR(r.rate, ref, 1e-9 * std::abs(ref) + 1e-18) << to_string(s) << " mu=" << mu << " nu=" << nu;
    }
  }
}

TEST(SecureKeyRate, PinnedValueAtZeroDistance) {
  const auto r = secure_key_rate(Scenario::VirtualSource, kPaper, at(0.0));
  EXPECT_GT(r.rate, 0.0);
  EXPECT_NEAR(r.rate, 3.5988947984449825e-04, 1e-17);
  EXPECT_EQ(r.rate, r.rate_clamped);
}

TEST(SecureKeyRate, RandomGuessMisalignmentYieldsNoKey) {
  ChannelParams ch;
  ch.e_det = 0.5;
  for (Scenario s : all_scenarios) {
    for (double d = 0.0; d <= 200.0; d += 10.0) {
      ch.distance_km = d;
      EXPECT_EQ(secure_key_rate(s, kPaper, ch).rate_clamped, 0.0);
    }
  }
}

TEST(SecureKeyRate, TaggedGainRatioIsImprovementFactor) {
  ChannelParams ch;
  ch.y0 = 0.0;
  for (double d : {0.0, 25.0, 80.0, 140.0}) {
    ch.distance_km = d;
    const auto v = secure_key_rate(Scenario::VirtualSource, kPaper, ch);
    const auto n = secure_key_rate(Scenario::NaiveEveAttenuator, kPaper, ch);
    EXPECT_NEAR(v.q1 / n.q1, std::exp(0.4 - 0.067), 1e-10);
    EXPECT_GE(v.rate, n.rate);
  }
}

TEST(SecureKeyRate, BalancedArmsCollapseVirtualOntoNaive) {
  for (double d = 0.0; d <= 150.0; d += 7.5) {
    const auto v = secure_key_rate(Scenario::VirtualSource, {0.3, 0.3}, at(d));
    const auto n = secure_key_rate(Scenario::NaiveEveAttenuator, {0.3, 0.3}, at(d));
    EXPECT_NEAR(v.q_total, n.q_total, 1e-12);
    EXPECT_NEAR(v.e_total, n.e_total, 1e-12);
    EXPECT_NEAR(v.q1, n.q1, 1e-12);
    EXPECT_NEAR(v.e1, n.e1, 1e-12);
    EXPECT_NEAR(v.rate, n.rate, 1e-12);
  }
}

TEST(SecureKeyRate, TaggedGainNeverExceedsTotalGain) {
  oracle::ParamSampler sample(4);
  for (int i = 0; i < 100; ++i) {
    const auto [mu, nu] = sample(1.5);
    for (double d = 0.0; d <= 250.0; d += 25.0) {
      for (Scenario s : all_scenarios) {
        const auto r = secure_key_rate(s, {mu, nu}, at(d));
        EXPECT_LE(r.q1, r.q_total + 1e-12);
        EXPECT_GE(r.e1, 0.0);
        EXPECT_LE(r.e1, 1.0);
        EXPECT_GE(r.rate_clamped, 0.0);
      }
    }
  }
}

TEST(SecureKeyRate, DetectorFreeLimitReproducesBounds) {
  // y0 = 0, eta_bob = 1: q1 equals the detector-free bound for every scenario
  ChannelParams ch;
  ch.y0 = 0.0;
  ch.eta_bob = 1.0;
  for (double d : {0.0, 30.0, 90.0}) {
    ch.distance_km = d;
    const double t = fiber_transmittance(ch.alpha_db_per_km, d);
    for (Scenario s : all_scenarios) {
      const auto r = secure_key_rate(s, kPaper, ch);
      EXPECT_NEAR(r.q1, detector_free_bound(s, kPaper, t), 1e-15) << to_string(s);
    }
  }
}

TEST(Scenario, NamesRoundTrip) {
  for (Scenario s : all_scenarios) EXPECT_EQ(parse_scenario(to_string(s)), s);
  EXPECT_EQ(parse_scenario("virtual"), Scenario::VirtualSource);
  EXPECT_EQ(parse_scenario("Compensated"), Scenario::ActiveCompensation);
  EXPECT_FALSE(parse_scenario("balanced").has_value());
}
