#pragma once

// Photon statistics and single-photon geometry of a phase-randomized
// two-arm source whose long arm (the one carrying the phase modulator)
// is attenuated, plus the virtual source that reproduces it.

#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <numeric>
#include <vector>

#include "error.hpp"

namespace umzi {

/// Mean photon numbers leaving Alice's half-interferometer.
///
/// `mu` is the short-arm pulse, `nu` the long-arm pulse after the phase
/// modulator. The long arm is the lossy one, so 0 <= nu <= mu; mu == nu is
/// a lossless modulator. mu - nu <= 1 is also required, otherwise the
/// virtual source would need a negative vacuum probability.
struct InterferometerParams {
  double mu = 0.4;
  double nu = 0.067;

  /// Total intensity launched into the fiber.
  double total() const noexcept { return mu + nu; }
};

inline void validate(const InterferometerParams& p) {
  using detail::fail;
  using detail::num;
  if (!std::isfinite(p.mu) || !std::isfinite(p.nu)) fail(ErrorKind::validation, "mu and nu must be finite");
  if (!(p.mu > 0.0)) fail(ErrorKind::validation, "mu must be positive, got " + num(p.mu));
  if (p.nu < 0.0) fail(ErrorKind::validation, "nu must be non-negative, got " + num(p.nu));
  if (p.nu > p.mu) fail(ErrorKind::validation, "nu exceeds mu (" + num(p.nu) + " > " + num(p.mu) + ")");
  if (p.mu - p.nu > 1.0) {
    fail(ErrorKind::negative_vacuum,
         "mu - nu = " + num(p.mu - p.nu) + " exceeds 1: virtual source vacuum probability would be negative");
  }
}

// ---------------------------------------------------------------------------
// Photon-number statistics
// ---------------------------------------------------------------------------

/// Poisson probability e^{-mean} mean^n / n!.
///
/// Uses the multiplicative recurrence while e^{-mean} is a normal double and
/// falls back to log-space otherwise, so large n and large means stay finite.
inline double poisson_pmf(double mean, int n) {
  if (!(mean >= 0.0) || !std::isfinite(mean)) detail::fail(ErrorKind::validation, "poisson mean must be finite and >= 0, got " + detail::num(mean));
  if (n < 0) detail::fail(ErrorKind::validation, "photon number must be >= 0");
  if (mean == 0.0) return n == 0 ? 1.0 : 0.0;

  const double vacuum = std::exp(-mean);
  if (std::isnormal(vacuum)) {
    double p = vacuum;
    for (int k = 1; k <= n && p > 0.0; ++k) p *= mean / k;
    return p;
  }
  return std::exp(n * std::log(mean) - mean - std::lgamma(n + 1.0));
}

inline constexpr int default_n_max = 64;
inline constexpr double default_tail_tolerance = 1e-15;

/// Probabilities for n = 0..n_max, with the mass above n_max carried
/// separately so that probs + tail_mass always sums to one.
struct PhotonNumberDistribution {
  std::vector<double> probs;
  double tail_mass = 0.0;

  int n_max() const noexcept { return static_cast<int>(probs.size()) - 1; }
  double operator[](int n) const { return probs.at(static_cast<std::size_t>(n)); }
  double total_mass() const { return std::accumulate(probs.begin(), probs.end(), 0.0) + tail_mass; }
};

namespace detail {

// Sum of Poisson terms strictly above n_max, summed upward so no
// cancellation against 1 - CDF occurs.
inline double poisson_tail(double mean, int n_max) {
  if (mean == 0.0) return 0.0;
  int k = n_max + 1;
  double term = poisson_pmf(mean, k);
  double sum = 0.0;
  for (int iter = 0; iter < 100000; ++iter) {
    sum += term;
    ++k;
    term *= mean / k;
    if (k > mean && (term == 0.0 || term < sum * 1e-18)) break;
  }
  return sum;
}

inline void check_truncation(int n_max, double tail, double tail_tolerance) {
  if (tail > tail_tolerance) {
    fail(ErrorKind::validation,
         "n_max = " + std::to_string(n_max) + " leaves tail mass " + num(tail) + " above tolerance " + num(tail_tolerance));
  }
}

}  // namespace detail

/// Truncated Poisson distribution with its exact upper tail.
inline PhotonNumberDistribution poisson_distribution(double mean, int n_max = default_n_max,
                                                     double tail_tolerance = default_tail_tolerance) {
  if (n_max < 1) detail::fail(ErrorKind::validation, "n_max must be >= 1");
  PhotonNumberDistribution d;
  d.probs.resize(static_cast<std::size_t>(n_max) + 1);
  for (int n = 0; n <= n_max; ++n) d.probs[static_cast<std::size_t>(n)] = poisson_pmf(mean, n);
  d.tail_mass = detail::poisson_tail(mean, n_max);
  detail::check_truncation(n_max, d.tail_mass, tail_tolerance);
  return d;
}

/// Photon-number distribution actually launched into the fiber: the
/// phase-randomized two-arm pulse is Poisson with mean mu + nu.
inline PhotonNumberDistribution channel_source_distribution(const InterferometerParams& params,
                                                            int n_max = default_n_max,
                                                            double tail_tolerance = default_tail_tolerance) {
  validate(params);
  return poisson_distribution(params.total(), n_max, tail_tolerance);
}

/// Probability (mu + nu) / (2 mu) that a balanced single photon survives
/// the long-arm attenuation.
inline double pass_efficiency_alice(const InterferometerParams& params) {
  validate(params);
  return params.total() / (2.0 * params.mu);
}

/// Single-photon probability of the virtual source, e^{-s} s / P_suc.
inline double virtual_single_photon_probability(const InterferometerParams& params) {
  validate(params);
  return poisson_pmf(params.total(), 1) / pass_efficiency_alice(params);
}

/// Source that, followed by the attenuating unitary, reproduces the real
/// unbalanced source. Its single-photon weight is inflated by 1/P_suc and
/// the excess is taken from the vacuum; multi-photon weights are unchanged.
inline PhotonNumberDistribution virtual_source_distribution(const InterferometerParams& params,
                                                            int n_max = default_n_max,
                                                            double tail_tolerance = default_tail_tolerance) {
  validate(params);
  const double s = params.total();
  const double p_suc = pass_efficiency_alice(params);

  PhotonNumberDistribution d = poisson_distribution(s, n_max, tail_tolerance);
  const double vacuum = d.probs[0];
  d.probs[1] = virtual_single_photon_probability(params);
  d.probs[0] = vacuum - vacuum * (s / p_suc - s);
  if (d.probs[0] < 0.0) d.probs[0] = 0.0;  // only reachable through rounding at mu - nu == 1
  return d;
}

// ---------------------------------------------------------------------------
// Single-photon state geometry
// ---------------------------------------------------------------------------

using Amplitude = std::complex<double>;

namespace detail {

// e^{i phi} for phi = 0, pi/2, pi, 3pi/2, exact rather than via cos/sin.
inline Amplitude bb84_phase_factor(int phase_index) {
  static constexpr std::array<Amplitude, 4> factors{Amplitude{1.0, 0.0}, Amplitude{0.0, 1.0},
                                                    Amplitude{-1.0, 0.0}, Amplitude{0.0, -1.0}};
  if (phase_index < 0 || phase_index > 3) fail(ErrorKind::validation, "phase index must be 0..3, got " + std::to_string(phase_index));
  return factors[static_cast<std::size_t>(phase_index)];
}

}  // namespace detail

/// One photon shared between the short arm and the long arm, the long-arm
/// amplitude carrying the modulator phase.
struct UnbalancedQubit {
  Amplitude amp_short;
  Amplitude amp_long;
  int phase_index = 0;

  double basis_phase() const noexcept { return phase_index * (std::numbers::pi / 2.0); }
  double norm_squared() const noexcept { return std::norm(amp_short) + std::norm(amp_long); }
};

/// <a|b>
inline Amplitude overlap(const UnbalancedQubit& a, const UnbalancedQubit& b) {
  return std::conj(a.amp_short) * b.amp_short + std::conj(a.amp_long) * b.amp_long;
}

/// The four signal states (sqrt(mu), e^{i phi} sqrt(nu)) / sqrt(mu + nu).
inline UnbalancedQubit single_photon_state(const InterferometerParams& params, int phase_index) {
  validate(params);
  const double s = params.total();
  if (!(s > 0.0)) detail::fail(ErrorKind::degenerate_source, "mu + nu must be positive");
  return UnbalancedQubit{Amplitude{std::sqrt(params.mu / s), 0.0},
                         detail::bb84_phase_factor(phase_index) * std::sqrt(params.nu / s), phase_index};
}

/// Un-normalized part of a state left in the channel (ancilla in |0>_A)
/// after the virtual unitary acts.
struct ChannelComponent {
  Amplitude amp_short;
  Amplitude amp_long;

  double norm_squared() const noexcept { return std::norm(amp_short) + std::norm(amp_long); }
};

/// Action of the virtual unitary on a long-arm single photon:
///   U |1>_l |0>_A = pass |1>_l |0>_A + flag |0>_l |1>_A
/// It is the identity on every other basis state, so two real amplitudes
/// describe it completely.
struct VirtualUnitaryImage {
  double pass_amplitude = 1.0;
  double flag_amplitude = 0.0;

  /// Applies U to the balanced state (|1>_s + e^{i phi} |1>_l) / sqrt(2) and
  /// projects the ancilla onto |0>_A.
  ChannelComponent apply_to_balanced(int phase_index) const {
    const double h = std::numbers::sqrt2 / 2.0;
    return ChannelComponent{Amplitude{h, 0.0}, detail::bb84_phase_factor(phase_index) * (h * pass_amplitude)};
  }
};

inline VirtualUnitaryImage virtual_unitary_action(const InterferometerParams& params) {
  validate(params);
  return VirtualUnitaryImage{std::sqrt(params.nu / params.mu), std::sqrt((params.mu - params.nu) / params.mu)};
}

}  // namespace umzi
