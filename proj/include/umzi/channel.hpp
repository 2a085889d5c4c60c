#pragma once

// Fiber, Bob's interferometer and threshold detectors.

#include <algorithm>
#include <cmath>

#include "error.hpp"
#include "source_model.hpp"

namespace umzi {

/// Link and post-processing parameters. Defaults are the GYS
/// long-distance fiber experiment figures as used in the standard
/// decoy-state rate simulations.
struct ChannelParams {
  double alpha_db_per_km = 0.21;
  double distance_km = 0.0;
  double eta_bob = 0.045;  ///< detector efficiency, interferometer loss excluded
  double y0 = 1.7e-6;      ///< dark-count yield per pulse
  double e_det = 0.033;    ///< misalignment error
  double e0 = 0.5;         ///< error rate of dark counts
  double f_ec = 1.22;      ///< error-correction inefficiency
  double q_sift = 0.5;     ///< basis-sifting factor
};

inline void validate(const ChannelParams& ch) {
  using detail::fail;
  using detail::num;
  if (!(ch.alpha_db_per_km > 0.0) || !std::isfinite(ch.alpha_db_per_km)) {
    fail(ErrorKind::validation, "alpha_db_per_km must be positive, got " + num(ch.alpha_db_per_km));
  }
  if (!(ch.distance_km >= 0.0) || !std::isfinite(ch.distance_km)) {
    fail(ErrorKind::validation, "distance_km must be >= 0, got " + num(ch.distance_km));
  }
  detail::require_probability(ch.eta_bob, "eta_bob");
  detail::require_probability(ch.y0, "y0");
  detail::require_probability(ch.e_det, "e_det");
  detail::require_probability(ch.e0, "e0");
  detail::require_probability(ch.q_sift, "q_sift");
  if (!(ch.f_ec >= 1.0) || !std::isfinite(ch.f_ec)) fail(ErrorKind::validation, "f_ec must be >= 1, got " + num(ch.f_ec));
}

/// 10^{-alpha l / 10}
inline double fiber_transmittance(double alpha_db_per_km, double distance_km) {
  if (!(alpha_db_per_km > 0.0)) detail::fail(ErrorKind::validation, "alpha_db_per_km must be positive");
  if (!(distance_km >= 0.0)) detail::fail(ErrorKind::validation, "distance_km must be >= 0, got " + detail::num(distance_km));
  return std::pow(10.0, -alpha_db_per_km * distance_km / 10.0);
}

/// Bob's interferometer pass efficiency. Uncompensated it is nu/(mu+nu);
/// with a matching modulator added to the short arms it drops to nu/(2mu).
inline double pass_efficiency_bob(const InterferometerParams& params, bool compensated) {
  validate(params);
  if (!(params.total() > 0.0)) detail::fail(ErrorKind::degenerate_source, "mu + nu must be positive");
  return compensated ? params.nu / (2.0 * params.mu) : params.nu / params.total();
}

/// Per-photon transmittance from Alice's output to a click.
struct LinkBudget {
  double fiber_transmittance = 1.0;
  double p_b = 1.0;
  double eta_bob = 1.0;
  double eta_total = 1.0;
};

inline LinkBudget make_link_budget(const ChannelParams& ch, double p_b) {
  validate(ch);
  detail::require_probability(p_b, "p_b");
  LinkBudget b;
  b.fiber_transmittance = fiber_transmittance(ch.alpha_db_per_km, ch.distance_km);
  b.p_b = p_b;
  b.eta_bob = ch.eta_bob;
  b.eta_total = b.fiber_transmittance * p_b * ch.eta_bob;
  return b;
}

namespace detail {

// 1 - (1 - eta)^n without cancellation at small eta.
inline double click_probability(double eta, int n) {
  if (n == 0 || eta == 0.0) return 0.0;
  if (eta == 1.0) return 1.0;
  return -std::expm1(n * std::log1p(-eta));
}

}  // namespace detail

/// Yield of an n-photon pulse: y0 + 1 - (1 - eta)^n, clamped to [0, 1].
inline double yield_n(double eta_total, double y0, int n) {
  detail::require_probability(eta_total, "eta_total");
  detail::require_probability(y0, "y0");
  if (n < 0) detail::fail(ErrorKind::validation, "photon number must be >= 0");
  return std::clamp(y0 + detail::click_probability(eta_total, n), 0.0, 1.0);
}

struct GainQber {
  double gain = 0.0;
  double qber = 0.0;
};

/// Overall gain and QBER of a source through a link.
///
/// The per-n yields enter the sum unclamped (the linear dark-count model)
/// and only the total gain is clamped, which keeps the Poisson closed forms
/// Q = y0 + 1 - e^{-eta s} exact. Tail pulses above n_max are counted with
/// the (n_max + 1)-photon yield.
inline GainQber overall_gain_and_qber(const PhotonNumberDistribution& dist, const LinkBudget& budget,
                                      const ChannelParams& ch) {
  validate(ch);
  detail::require_probability(budget.eta_total, "eta_total");
  const double eta = budget.eta_total;

  double gain = 0.0;
  double errors = 0.0;
  for (int n = 0; n <= dist.n_max(); ++n) {
    const double p = dist[n];
    const double click = detail::click_probability(eta, n);
    gain += p * (ch.y0 + click);
    errors += p * (ch.e0 * ch.y0 + ch.e_det * click);
  }
  if (dist.tail_mass > 0.0) {
    const double click = detail::click_probability(eta, dist.n_max() + 1);
    gain += dist.tail_mass * (ch.y0 + click);
    errors += dist.tail_mass * (ch.e0 * ch.y0 + ch.e_det * click);
  }

  if (!(gain > 0.0)) detail::fail(ErrorKind::undefined_qber, "overall gain is zero, QBER undefined");
  return GainQber{std::min(gain, 1.0), std::clamp(errors / gain, 0.0, 1.0)};
}

}  // namespace umzi
