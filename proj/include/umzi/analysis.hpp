#pragma once

// Rate-versus-distance sweeps, cutoff-distance bisection and golden-section
// optimization of the short-arm intensity.

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "channel.hpp"
#include "error.hpp"
#include "keyrate.hpp"
#include "source_model.hpp"

namespace umzi {

inline constexpr double default_tol_km = 0.01;

/// Largest distance with a positive secure rate, located by bisection.
///
/// Requires rate(lo_km) > 0 >= rate(hi_km); the bracket is never widened.
/// Returns the lower end of the final bracket, so the result always has a
/// positive rate and lies within tol_km of the sign change.
inline double max_distance(Scenario scenario, const InterferometerParams& params, ChannelParams channel,
                           double lo_km, double hi_km, double tol_km = default_tol_km) {
  if (!(tol_km > 0.0)) detail::fail(ErrorKind::validation, "tol_km must be positive");
  auto rate_at = [&](double d) {
    channel.distance_km = d;
    return secure_key_rate(scenario, params, channel).rate;
  };
  if (!(lo_km <= hi_km)) detail::fail(ErrorKind::bracket, "bracket lower end exceeds upper end");
  const double r_lo = rate_at(lo_km);
  const double r_hi = rate_at(hi_km);
  if (!(r_lo > 0.0 && r_hi <= 0.0)) {
    detail::fail(ErrorKind::bracket, std::string("no positive-to-zero rate crossing for ") + to_string(scenario) +
                                         " in [" + detail::num(lo_km) + ", " + detail::num(hi_km) + "] km");
  }
  while (hi_km - lo_km > tol_km) {
    const double mid = 0.5 * (lo_km + hi_km);
    if (rate_at(mid) > 0.0) {
      lo_km = mid;
    } else {
      hi_km = mid;
    }
  }
  return lo_km;
}

struct SweepConfig {
  double d_min_km = 0.0;
  double d_max_km = 250.0;
  double step_km = 1.0;
  std::vector<Scenario> scenarios{all_scenarios.begin(), all_scenarios.end()};
  InterferometerParams params;
  ChannelParams channel;  ///< distance_km is overridden per grid point
  double tol_km = default_tol_km;
};

inline void validate(const SweepConfig& c) {
  using detail::fail;
  if (!std::isfinite(c.d_min_km) || !std::isfinite(c.d_max_km) || c.d_min_km < 0.0) {
    fail(ErrorKind::validation, "sweep distances must be finite and >= 0");
  }
  if (c.d_min_km > c.d_max_km) fail(ErrorKind::validation, "d_min_km exceeds d_max_km");
  if (!(c.step_km > 0.0)) fail(ErrorKind::validation, "step_km must be positive");
  if (c.scenarios.empty()) fail(ErrorKind::validation, "at least one scenario is required");
  validate(c.params);
  validate(c.channel);
}

/// Inclusive grid d_min, d_min + step, ..., never exceeding d_max.
inline std::vector<double> distance_grid(double d_min, double d_max, double step) {
  const double span = (d_max - d_min) / step;
  auto n = static_cast<long long>(std::floor(span));
  if (span - static_cast<double>(n) > 1.0 - 1e-9) ++n;  // absorb rounding such as 0.3 / 0.1
  std::vector<double> grid;
  grid.reserve(static_cast<std::size_t>(n) + 1);
  for (long long i = 0; i <= n; ++i) grid.push_back(std::min(d_min + static_cast<double>(i) * step, d_max));
  return grid;
}

struct ScenarioSeries {
  Scenario scenario = Scenario::VirtualSource;
  std::vector<ScenarioRates> points;     ///< ascending distance
  std::optional<double> max_distance_km; ///< absent if the rate never crosses zero on the grid
};

struct SweepResult {
  std::vector<ScenarioSeries> series;  ///< scenario enumeration order
};

/// Evaluates every requested scenario on the distance grid. Duplicate
/// scenarios are collapsed and output follows enumeration order.
inline SweepResult sweep(const SweepConfig& config) {
  validate(config);
  const std::vector<double> grid = distance_grid(config.d_min_km, config.d_max_km, config.step_km);

  SweepResult result;
  for (Scenario s : all_scenarios) {
    if (std::find(config.scenarios.begin(), config.scenarios.end(), s) == config.scenarios.end()) continue;

    ScenarioSeries series;
    series.scenario = s;
    series.points.reserve(grid.size());
    ChannelParams ch = config.channel;
    for (double d : grid) {
      ch.distance_km = d;
      try {
        series.points.push_back(secure_key_rate(s, config.params, ch));
      } catch (const Error& e) {
        throw Error(e.kind(), std::string(to_string(s)) + " at " + detail::num(d) + " km: " + e.what());
      }
    }

    const auto& pts = series.points;
    if (pts.back().rate <= 0.0) {
      std::size_t last_positive = pts.size();
      for (std::size_t i = pts.size(); i-- > 0;) {
        if (pts[i].rate > 0.0) {
          last_positive = i;
          break;
        }
      }
      if (last_positive < pts.size()) {
        series.max_distance_km = max_distance(s, config.params, config.channel, pts[last_positive].distance_km,
                                              pts[last_positive + 1].distance_km, config.tol_km);
      }
    }
    result.series.push_back(std::move(series));
  }
  return result;
}

struct MuOptimum {
  double mu = 0.0;
  double rate = 0.0;
  bool zero_rate = false;  ///< no positive rate anywhere the search looked
};

/// Golden-section maximization of the secure rate over mu with
/// nu = loss_ratio * mu, at the channel's fixed distance. Assumes the rate
/// is unimodal in mu on the bracket.
inline MuOptimum optimize_mu(Scenario scenario, double loss_ratio, const ChannelParams& channel, double mu_lo,
                             double mu_hi, double tol = 1e-4) {
  using detail::fail;
  if (!(loss_ratio > 0.0 && loss_ratio <= 1.0)) fail(ErrorKind::validation, "loss_ratio must lie in (0, 1]");
  if (!(mu_lo > 0.0) || !(mu_lo < mu_hi)) fail(ErrorKind::bracket, "mu bracket must satisfy 0 < lo < hi");
  if (!(tol > 0.0)) fail(ErrorKind::validation, "tol must be positive");
  validate(channel);

  auto rate_at = [&](double mu) {
    return secure_key_rate(scenario, InterferometerParams{mu, loss_ratio * mu}, channel).rate;
  };

  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = mu_lo;
  double b = mu_hi;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = rate_at(c);
  double fd = rate_at(d);
  while (b - a > tol) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = rate_at(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = rate_at(d);
    }
  }

  MuOptimum best;
  best.mu = 0.5 * (a + b);
  best.rate = rate_at(best.mu);
  best.zero_rate = !(best.rate > 0.0);
  return best;
}

}  // namespace umzi
