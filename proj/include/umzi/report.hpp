#pragma once

// CSV rendering and parsing of rate tables. Numbers are written with 17
// significant digits so that parsing them back is exact.

#include <cstdio>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "analysis.hpp"
#include "config.hpp"
#include "error.hpp"
#include "keyrate.hpp"

namespace umzi {

inline constexpr std::string_view rates_csv_header = "scenario,distance_km,q_total,e_total,q1,e1,rate,rate_clamped";

inline std::string format_number(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.16e", x);
  return buf;
}

inline void write_rates_row(std::ostream& os, const ScenarioRates& r) {
  os << to_string(r.scenario) << ',' << format_number(r.distance_km) << ',' << format_number(r.q_total) << ','
     << format_number(r.e_total) << ',' << format_number(r.q1) << ',' << format_number(r.e1) << ','
     << format_number(r.rate) << ',' << format_number(r.rate_clamped);
}

/// `# generated-by` line followed by the effective configuration.
inline void write_config_comments(std::ostream& os, Command command, const std::vector<Setting>& settings) {
  os << "# generated-by " << tool_name << ' ' << tool_version << '\n';
  os << "# command = " << to_string(command) << '\n';
  for (const auto& s : settings) os << "# " << s.key << " = " << s.value << " [" << s.provenance << "]\n";
}

inline void write_max_distance_comments(std::ostream& os, const SweepResult& result) {
  for (const auto& series : result.series) {
    os << "# max_distance_km " << to_string(series.scenario) << " = "
       << (series.max_distance_km ? format_number(*series.max_distance_km) : std::string("none")) << '\n';
  }
}

/// Sweep table: config comments, per-scenario cutoff comments, header, rows.
inline void write_sweep_csv(std::ostream& os, const SweepResult& result, Command command,
                            const std::vector<Setting>& settings) {
  write_config_comments(os, command, settings);
  write_max_distance_comments(os, result);
  os << rates_csv_header << '\n';
  for (const auto& series : result.series) {
    for (const auto& p : series.points) {
      write_rates_row(os, p);
      os << '\n';
    }
  }
}

namespace detail {

inline double parse_csv_number(std::string_view field, std::size_t line_no) {
  auto v = parse_double(field);
  if (!v) fail(ErrorKind::io, "line " + std::to_string(line_no) + ": bad number `" + std::string(field) + "`");
  return *v;
}

inline std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  while (true) {
    const auto pos = line.find(sep);
    out.push_back(line.substr(0, pos));
    if (pos == std::string_view::npos) break;
    line.remove_prefix(pos + 1);
  }
  return out;
}

}  // namespace detail

/// Inverse of write_sweep_csv. Series come back in file order; cutoff
/// distances are recovered from the `# max_distance_km` comments.
inline SweepResult read_sweep_csv(std::istream& is) {
  SweepResult result;
  std::map<Scenario, std::optional<double>> cutoffs;
  std::string line;
  std::size_t line_no = 0;
  bool header_seen = false;
  while (std::getline(is, line)) {
    ++line_no;
    std::string_view v = line;
    if (v.empty()) continue;
    if (v.front() == '#') {
      constexpr std::string_view tag = "# max_distance_km ";
      if (v.starts_with(tag)) {
        v.remove_prefix(tag.size());
        const auto eq = v.find(" = ");
        auto sc = parse_scenario(v.substr(0, eq));
        if (eq == std::string_view::npos || !sc) detail::fail(ErrorKind::io, "line " + std::to_string(line_no) + ": bad cutoff comment");
        const auto value = v.substr(eq + 3);
        cutoffs[*sc] = value == "none" ? std::nullopt : std::optional<double>(detail::parse_csv_number(value, line_no));
      }
      continue;
    }
    if (!header_seen) {
      if (v != rates_csv_header) detail::fail(ErrorKind::io, "line " + std::to_string(line_no) + ": unexpected CSV header");
      header_seen = true;
      continue;
    }
    const auto fields = detail::split(v, ',');
    if (fields.size() != 8) detail::fail(ErrorKind::io, "line " + std::to_string(line_no) + ": expected 8 fields");
    auto sc = parse_scenario(fields[0]);
    if (!sc) detail::fail(ErrorKind::io, "line " + std::to_string(line_no) + ": unknown scenario");
    ScenarioRates r;
    r.scenario = *sc;
    r.distance_km = detail::parse_csv_number(fields[1], line_no);
    r.q_total = detail::parse_csv_number(fields[2], line_no);
    r.e_total = detail::parse_csv_number(fields[3], line_no);
    r.q1 = detail::parse_csv_number(fields[4], line_no);
    r.e1 = detail::parse_csv_number(fields[5], line_no);
    r.rate = detail::parse_csv_number(fields[6], line_no);
    r.rate_clamped = detail::parse_csv_number(fields[7], line_no);
    if (result.series.empty() || result.series.back().scenario != r.scenario) {
      result.series.push_back(ScenarioSeries{r.scenario, {}, std::nullopt});
    }
    result.series.back().points.push_back(r);
  }
  if (!header_seen) detail::fail(ErrorKind::io, "no CSV header found");
  for (auto& s : result.series) {
    if (auto it = cutoffs.find(s.scenario); it != cutoffs.end()) s.max_distance_km = it->second;
  }
  return result;
}

}  // namespace umzi
