#pragma once

// Detector-free single-photon rate bounds for the three treatments of the
// lossy modulator, and the GLLP secure key rate (ideal decoy estimation)
// used for rate-versus-distance curves.

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <optional>
#include <string>
#include <string_view>

#include "channel.hpp"
#include "error.hpp"
#include "source_model.hpp"

namespace umzi {

/// Binary Shannon entropy in bits.
inline double binary_entropy(double x) {
  detail::require_probability(x, "entropy argument");
  if (x == 0.0 || x == 1.0) return 0.0;
  return -x * std::log2(x) - (1.0 - x) * std::log2(1.0 - x);
}

// ---------------------------------------------------------------------------
// Detector-free bounds (no dark counts, unit detector efficiency)
// ---------------------------------------------------------------------------

/// Modulator loss treated as an attenuator controlled by Eve. P_A * P_B
/// is applied in its reduced form nu/(2mu), which is what makes this and
/// the compensated bound agree bit for bit.
inline double naive_single_photon_rate(const InterferometerParams& params, double fiber_t) {
  validate(params);
  detail::require_probability(fiber_t, "fiber_t");
  const double p1 = poisson_pmf(2.0 * params.mu, 1);
  return p1 * fiber_t * (params.nu / (2.0 * params.mu));
}

/// Virtual-source bound: p~1 * P_suc * fiber_t * P_B = e^{-(mu+nu)} nu fiber_t.
inline double virtual_single_photon_rate(const InterferometerParams& params, double fiber_t) {
  validate(params);
  detail::require_probability(fiber_t, "fiber_t");
  const double launched = virtual_single_photon_probability(params) * pass_efficiency_alice(params);
  return launched * fiber_t * pass_efficiency_bob(params, false);
}

/// Loss compensated by a matching modulator on both short arms
/// (P_A' = 1, P_B' = nu/(2mu)).
inline double compensated_single_photon_rate(const InterferometerParams& params, double fiber_t) {
  validate(params);
  detail::require_probability(fiber_t, "fiber_t");
  const double p1 = poisson_pmf(2.0 * params.mu, 1);
  const double p_a = 1.0;
  return p1 * fiber_t * (p_a * pass_efficiency_bob(params, true));
}

/// e^{mu - nu}, the ratio of the virtual-source bound to the naive one.
inline double improvement_factor(const InterferometerParams& params) {
  validate(params);
  return std::exp(params.mu - params.nu);
}

// ---------------------------------------------------------------------------
// Scenarios and the GLLP rate
// ---------------------------------------------------------------------------

enum class Scenario { IdealPM, VirtualSource, NaiveEveAttenuator, ActiveCompensation };

inline constexpr std::array<Scenario, 4> all_scenarios{Scenario::IdealPM, Scenario::VirtualSource,
                                                       Scenario::NaiveEveAttenuator, Scenario::ActiveCompensation};

inline const char* to_string(Scenario s) noexcept {
  switch (s) {
    case Scenario::IdealPM: return "IdealPM";
    case Scenario::VirtualSource: return "VirtualSource";
    case Scenario::NaiveEveAttenuator: return "NaiveEveAttenuator";
    case Scenario::ActiveCompensation: return "ActiveCompensation";
  }
  return "?";
}

/// Accepts the canonical names and the short aliases ideal, virtual,
/// naive and compensated.
inline std::optional<Scenario> parse_scenario(std::string_view name) {
  std::string lower(name);
  std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (lower == "idealpm" || lower == "ideal") return Scenario::IdealPM;
  if (lower == "virtualsource" || lower == "virtual") return Scenario::VirtualSource;
  if (lower == "naiveeveattenuator" || lower == "naive") return Scenario::NaiveEveAttenuator;
  if (lower == "activecompensation" || lower == "compensated") return Scenario::ActiveCompensation;
  return std::nullopt;
}

/// Detector-free bound matching a scenario; IdealPM is the naive bound with nu = mu.
inline double detector_free_bound(Scenario s, const InterferometerParams& params, double fiber_t) {
  switch (s) {
    case Scenario::IdealPM: return naive_single_photon_rate({params.mu, params.mu}, fiber_t);
    case Scenario::VirtualSource: return virtual_single_photon_rate(params, fiber_t);
    case Scenario::NaiveEveAttenuator: return naive_single_photon_rate(params, fiber_t);
    case Scenario::ActiveCompensation: return compensated_single_photon_rate(params, fiber_t);
  }
  return 0.0;
}

struct SinglePhotonBounds {
  double y1 = 0.0;
  double e1 = 0.0;
};

/// Single-photon yield and error rate at their true channel values, as an
/// ideal (infinite-decoy) estimate would report them.
inline SinglePhotonBounds ideal_decoy_bounds(double eta1, const ChannelParams& ch) {
  validate(ch);
  detail::require_probability(eta1, "eta1");
  const double y1 = std::min(ch.y0 + eta1, 1.0);
  if (!(y1 > 0.0)) detail::fail(ErrorKind::undefined_qber, "single-photon yield is zero, e1 undefined");
  return SinglePhotonBounds{y1, (ch.e0 * ch.y0 + ch.e_det * eta1) / y1};
}

struct ScenarioRates {
  Scenario scenario = Scenario::VirtualSource;
  double distance_km = 0.0;
  double q_total = 0.0;
  double e_total = 0.0;
  double q1 = 0.0;
  double e1 = 0.0;
  double rate = 0.0;          ///< per pulse, may be negative
  double rate_clamped = 0.0;  ///< max(rate, 0)
};

namespace detail {

// What each scenario sends into the channel and what it credits as tagged
// single photons.
struct ScenarioModel {
  PhotonNumberDistribution source;
  double p_b = 0.0;       // Bob interferometer pass efficiency
  double tagged_p1 = 0.0; // single-photon probability credited by GLLP
  double eta1 = 0.0;      // transmittance of one tagged photon to a click
};

inline ScenarioModel scenario_model(Scenario scenario, const InterferometerParams& params, double fiber,
                                    double eta_bob, int n_max) {
  const double two_mu = 2.0 * params.mu;
  ScenarioModel m;
  switch (scenario) {
    case Scenario::IdealPM: {
      const InterferometerParams balanced{params.mu, params.mu};
      m.source = channel_source_distribution(balanced, n_max);
      m.p_b = pass_efficiency_bob(balanced, false);
      m.tagged_p1 = poisson_pmf(two_mu, 1);
      m.eta1 = fiber * m.p_b * eta_bob;
      break;
    }
    case Scenario::VirtualSource:
      m.source = channel_source_distribution(params, n_max);
      m.p_b = pass_efficiency_bob(params, false);
      m.tagged_p1 = virtual_single_photon_probability(params);
      m.eta1 = pass_efficiency_alice(params) * fiber * m.p_b * eta_bob;
      break;
    case Scenario::NaiveEveAttenuator:
      m.source = channel_source_distribution(params, n_max);
      m.p_b = pass_efficiency_bob(params, false);
      m.tagged_p1 = poisson_pmf(two_mu, 1);
      m.eta1 = (params.nu / two_mu) * fiber * eta_bob;
      break;
    case Scenario::ActiveCompensation:
      m.source = poisson_distribution(two_mu, n_max);
      m.p_b = pass_efficiency_bob(params, true);
      m.tagged_p1 = poisson_pmf(two_mu, 1);
      m.eta1 = fiber * m.p_b * eta_bob;
      break;
  }
  return m;
}

}  // namespace detail

/// GLLP secure key rate per pulse:
///   R = q [ Q1 (1 - H2(e1)) - f Q H2(E) ]
/// with Q, E measured on the real source and Q1, e1 taken from the
/// scenario's tagged single-photon model. e1 is clamped to [0, 1/2] before
/// the entropy is taken.
inline ScenarioRates secure_key_rate(Scenario scenario, const InterferometerParams& params, const ChannelParams& ch,
                                     int n_max = default_n_max) {
  validate(params);
  validate(ch);
  const double fiber = fiber_transmittance(ch.alpha_db_per_km, ch.distance_km);
  const detail::ScenarioModel m = detail::scenario_model(scenario, params, fiber, ch.eta_bob, n_max);

  const GainQber measured = overall_gain_and_qber(m.source, make_link_budget(ch, m.p_b), ch);
  const SinglePhotonBounds single = ideal_decoy_bounds(m.eta1, ch);

  ScenarioRates r;
  r.scenario = scenario;
  r.distance_km = ch.distance_km;
  r.q_total = measured.gain;
  r.e_total = measured.qber;
  r.q1 = m.tagged_p1 * single.y1;
  r.e1 = single.e1;
  r.rate = ch.q_sift * (r.q1 * (1.0 - binary_entropy(std::clamp(r.e1, 0.0, 0.5))) -
                        ch.f_ec * r.q_total * binary_entropy(r.e_total));
  r.rate_clamped = std::max(r.rate, 0.0);
  return r;
}

}  // namespace umzi
