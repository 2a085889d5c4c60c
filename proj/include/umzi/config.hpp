#pragma once

// Flat `key = value` run configuration with flag > file > default
// precedence and an aggregated validation report.

#include <algorithm>
#include <charconv>
#include <cmath>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "analysis.hpp"
#include "channel.hpp"
#include "error.hpp"
#include "keyrate.hpp"
#include "source_model.hpp"

namespace umzi {

inline constexpr const char* tool_name = "umzi-qkd";
inline constexpr const char* tool_version = "1.0.0";

enum class Command { eval, sweep, maxdist, optimize };

inline const char* to_string(Command c) noexcept {
  switch (c) {
    case Command::eval: return "eval";
    case Command::sweep: return "sweep";
    case Command::maxdist: return "maxdist";
    case Command::optimize: return "optimize";
  }
  return "?";
}

inline std::optional<Command> parse_command(std::string_view s) {
  if (s == "eval") return Command::eval;
  if (s == "sweep") return Command::sweep;
  if (s == "maxdist") return Command::maxdist;
  if (s == "optimize") return Command::optimize;
  return std::nullopt;
}

/// One effective setting as echoed in summaries and data-file headers.
struct Setting {
  std::string key;
  std::string value;
  std::string provenance;  ///< "flag", "file" or the default's source tag
};

struct RunConfig {
  Command command = Command::sweep;
  InterferometerParams interferometer;
  ChannelParams channel;  ///< distance_km is the eval/optimize point
  std::vector<Scenario> scenarios;
  SweepConfig sweep;      ///< also supplies the maxdist bracket [d_min_km, d_max_km] and tol_km
  double mu_min = 0.01;
  double mu_max = 1.0;
  double mu_tol = 1e-4;
  std::optional<std::string> output_path;
  std::vector<Setting> settings;
};

/// Command-line side of the configuration: the positional command and
/// `--key value` pairs.
struct CliOverrides {
  std::optional<std::string> command;
  std::vector<std::pair<std::string, std::string>> values;
};

namespace detail {

struct KeySpec {
  const char* key;
  const char* default_value;
  const char* provenance;
};

// Loss, detector and dark-count figures are the GYS fiber experiment values
// as carried into the standard decoy-state simulations; f_ec and q_sift are
// that simulation method's error-correction and sifting constants.
inline constexpr KeySpec config_keys[] = {
    {"mu", "0.4", "simulation-default"},
    {"nu", "0.067", "simulation-default"},
    {"alpha_db_per_km", "0.21", "gys-default"},
    {"eta_bob", "0.045", "gys-default"},
    {"y0", "1.7e-6", "gys-default"},
    {"e_det", "0.033", "gys-default"},
    {"e0", "0.5", "built-in-default"},
    {"f_ec", "1.22", "decoy-method-default"},
    {"q_sift", "0.5", "decoy-method-default"},
    {"d_min_km", "0", "built-in-default"},
    {"d_max_km", "250", "built-in-default"},
    {"step_km", "1", "built-in-default"},
    {"tol_km", "0.01", "built-in-default"},
    {"distance_km", "0", "built-in-default"},
    {"mu_min", "0.01", "built-in-default"},
    {"mu_max", "1", "built-in-default"},
    {"mu_tol", "1e-4", "built-in-default"},
    {"scenarios", "IdealPM,VirtualSource,NaiveEveAttenuator,ActiveCompensation", "built-in-default"},
    {"output", "", "built-in-default"},
};

inline std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

inline const KeySpec* find_key(std::string_view key) {
  for (const auto& k : config_keys) {
    if (key == k.key) return &k;
  }
  return nullptr;
}

inline std::optional<double> parse_double(std::string_view s) {
  double v = 0.0;
  const auto* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc{} || ptr != end || !std::isfinite(v)) return std::nullopt;
  return v;
}

inline std::optional<std::vector<Scenario>> parse_scenario_list(std::string_view s) {
  std::vector<Scenario> out;
  while (true) {
    const auto comma = s.find(',');
    const auto item = trim(s.substr(0, comma));
    if (item == "all") {
      out.assign(all_scenarios.begin(), all_scenarios.end());
    } else {
      auto sc = parse_scenario(item);
      if (!sc) return std::nullopt;
      if (std::find(out.begin(), out.end(), *sc) == out.end()) out.push_back(*sc);
    }
    if (comma == std::string_view::npos) break;
    s.remove_prefix(comma + 1);
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace detail

/// Builds a validated RunConfig from config-file text and command-line
/// overrides. Every problem found is reported in a single validation error,
/// one line per offending key.
inline RunConfig parse_config(std::string_view file_contents, const CliOverrides& overrides) {
  using detail::config_keys;
  std::vector<std::string> problems;

  // effective raw values, indexed like config_keys
  constexpr std::size_t n_keys = std::size(config_keys);
  std::vector<std::string> raw(n_keys);
  std::vector<std::string> provenance(n_keys);
  for (std::size_t i = 0; i < n_keys; ++i) {
    raw[i] = config_keys[i].default_value;
    provenance[i] = config_keys[i].provenance;
  }
  auto assign = [&](std::string_view key, std::string_view value, const char* source, const std::string& where) {
    const auto* spec = detail::find_key(key);
    if (!spec) {
      problems.push_back(std::string(key) + ": unknown key" + where);
      return;
    }
    const auto i = static_cast<std::size_t>(spec - config_keys);
    raw[i] = std::string(value);
    provenance[i] = source;
  };

  std::size_t line_no = 0;
  std::string_view rest = file_contents;
  while (!rest.empty()) {
    ++line_no;
    const auto nl = rest.find('\n');
    std::string_view line = rest.substr(0, nl);
    rest = nl == std::string_view::npos ? std::string_view{} : rest.substr(nl + 1);
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = detail::trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    const std::string where = " (config line " + std::to_string(line_no) + ")";
    if (eq == std::string_view::npos) {
      problems.push_back("line " + std::to_string(line_no) + ": expected `key = value`");
      continue;
    }
    assign(detail::trim(line.substr(0, eq)), detail::trim(line.substr(eq + 1)), "file", where);
  }
  for (const auto& [key, value] : overrides.values) assign(key, detail::trim(value), "flag", " (command line)");

  RunConfig cfg;
  auto value_of = [&](const char* key) -> const std::string& {
    return raw[static_cast<std::size_t>(detail::find_key(key) - config_keys)];
  };
  auto number = [&](const char* key) {
    auto v = detail::parse_double(value_of(key));
    if (!v) {
      problems.push_back(std::string(key) + ": cannot parse number `" + value_of(key) + "`");
      return std::nan("");
    }
    return *v;
  };
  auto check = [&](bool ok, const char* key, const std::string& message) {
    if (!ok) problems.push_back(std::string(key) + ": " + message);
  };

  if (!overrides.command) {
    problems.push_back("command: missing command (expected eval, sweep, maxdist or optimize)");
  } else if (auto c = parse_command(*overrides.command)) {
    cfg.command = *c;
  } else {
    problems.push_back("command: unknown command `" + *overrides.command + "`");
  }

  auto& ip = cfg.interferometer;
  ip.mu = number("mu");
  ip.nu = number("nu");
  check(!(ip.mu <= 0.0), "mu", "must be positive");
  check(!(ip.nu < 0.0), "nu", "must be non-negative");
  check(!(ip.nu > ip.mu), "nu", "nu exceeds mu");
  check(!(ip.mu - ip.nu > 1.0), "nu", "mu - nu exceeds 1 (virtual source would need a negative vacuum probability)");

  auto& ch = cfg.channel;
  ch.alpha_db_per_km = number("alpha_db_per_km");
  ch.eta_bob = number("eta_bob");
  ch.y0 = number("y0");
  ch.e_det = number("e_det");
  ch.e0 = number("e0");
  ch.f_ec = number("f_ec");
  ch.q_sift = number("q_sift");
  ch.distance_km = number("distance_km");
  check(!(ch.alpha_db_per_km <= 0.0), "alpha_db_per_km", "must be positive");
  for (const char* key : {"eta_bob", "y0", "e_det", "e0", "q_sift"}) {
    const double v = number(key);
    check(std::isnan(v) || (v >= 0.0 && v <= 1.0), key, "must lie in [0, 1]");
  }
  check(!(ch.f_ec < 1.0), "f_ec", "must be >= 1");
  check(!(ch.distance_km < 0.0), "distance_km", "must be >= 0");

  auto& sw = cfg.sweep;
  sw.d_min_km = number("d_min_km");
  sw.d_max_km = number("d_max_km");
  sw.step_km = number("step_km");
  sw.tol_km = number("tol_km");
  check(!(sw.d_min_km < 0.0), "d_min_km", "must be >= 0");
  check(!(sw.d_min_km > sw.d_max_km), "d_max_km", "must be >= d_min_km");
  check(!(sw.step_km <= 0.0), "step_km", "must be positive");
  check(!(sw.tol_km <= 0.0), "tol_km", "must be positive");

  cfg.mu_min = number("mu_min");
  cfg.mu_max = number("mu_max");
  cfg.mu_tol = number("mu_tol");
  check(!(cfg.mu_min <= 0.0), "mu_min", "must be positive");
  check(!(cfg.mu_max <= cfg.mu_min), "mu_max", "must exceed mu_min");
  check(!(cfg.mu_tol <= 0.0), "mu_tol", "must be positive");

  if (auto list = detail::parse_scenario_list(value_of("scenarios")); !list || list->empty()) {
    problems.push_back("scenarios: unrecognized scenario list `" + value_of("scenarios") + "`");
  } else {
    cfg.scenarios = *list;
  }
  if (!value_of("output").empty()) cfg.output_path = value_of("output");

  if (!problems.empty()) {
    std::string report = "invalid configuration:";
    for (const auto& p : problems) report += "\n  " + p;
    detail::fail(ErrorKind::validation, report);
  }

  sw.params = ip;
  sw.channel = ch;
  sw.scenarios = cfg.scenarios;
  validate(ip);
  validate(ch);
  validate(sw);

  for (std::size_t i = 0; i < n_keys; ++i) cfg.settings.push_back({config_keys[i].key, raw[i], provenance[i]});
  return cfg;
}

}  // namespace umzi
