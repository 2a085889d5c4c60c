#pragma once

// Command execution behind the umzi-qkd tool.

#include <fstream>
#include <ostream>
#include <sstream>
#include <string>

#include "analysis.hpp"
#include "config.hpp"
#include "error.hpp"
#include "keyrate.hpp"
#include "report.hpp"

namespace umzi {

namespace exit_code {
inline constexpr int ok = 0;
inline constexpr int internal = 1;
inline constexpr int validation = 2;
inline constexpr int bracket = 3;
inline constexpr int undefined_qber = 4;
inline constexpr int io = 5;
}  // namespace exit_code

inline int exit_code_for(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::validation:
    case ErrorKind::degenerate_source:
    case ErrorKind::negative_vacuum: return exit_code::validation;
    case ErrorKind::bracket: return exit_code::bracket;
    case ErrorKind::undefined_qber: return exit_code::undefined_qber;
    case ErrorKind::io: return exit_code::io;
  }
  return exit_code::internal;
}

namespace detail {

inline void render_eval(std::ostream& os, const RunConfig& cfg) {
  const double fiber = fiber_transmittance(cfg.channel.alpha_db_per_km, cfg.channel.distance_km);
  os << rates_csv_header << ",detector_free_bound\n";
  for (Scenario s : cfg.scenarios) {
    write_rates_row(os, secure_key_rate(s, cfg.interferometer, cfg.channel));
    os << ',' << format_number(detector_free_bound(s, cfg.interferometer, fiber)) << '\n';
  }
}

inline void render_maxdist(std::ostream& os, const RunConfig& cfg) {
  os << "scenario,max_distance_km\n";
  for (Scenario s : cfg.scenarios) {
    const double d =
        max_distance(s, cfg.interferometer, cfg.channel, cfg.sweep.d_min_km, cfg.sweep.d_max_km, cfg.sweep.tol_km);
    os << to_string(s) << ',' << format_number(d) << '\n';
  }
}

inline void render_optimize(std::ostream& os, const RunConfig& cfg) {
  const double loss_ratio = cfg.interferometer.nu / cfg.interferometer.mu;
  os << "scenario,distance_km,loss_ratio,mu_opt,rate_opt,zero_rate\n";
  for (Scenario s : cfg.scenarios) {
    const MuOptimum o = optimize_mu(s, loss_ratio, cfg.channel, cfg.mu_min, cfg.mu_max, cfg.mu_tol);
    os << to_string(s) << ',' << format_number(cfg.channel.distance_km) << ',' << format_number(loss_ratio) << ','
       << format_number(o.mu) << ',' << format_number(o.rate) << ',' << (o.zero_rate ? "true" : "false") << '\n';
  }
}

}  // namespace detail

/// Runs one command. The data document (config comments plus a CSV table)
/// goes to `output_path` when set, otherwise to `out`; with a file output,
/// `out` receives only the comment lines as a summary. Errors are reported
/// on `err` and mapped to exit codes.
inline int run(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  try {
    std::ostringstream summary;
    std::ostringstream table;
    write_config_comments(summary, cfg.command, cfg.settings);

    switch (cfg.command) {
      case Command::eval: detail::render_eval(table, cfg); break;
      case Command::maxdist: detail::render_maxdist(table, cfg); break;
      case Command::optimize: detail::render_optimize(table, cfg); break;
      case Command::sweep: {
        const SweepResult result = sweep(cfg.sweep);
        write_max_distance_comments(summary, result);
        table << rates_csv_header << '\n';
        for (const auto& series : result.series) {
          for (const auto& p : series.points) {
            write_rates_row(table, p);
            table << '\n';
          }
        }
        break;
      }
    }

    if (cfg.output_path) {
      std::ofstream file(*cfg.output_path, std::ios::binary | std::ios::trunc);
      if (!file) detail::fail(ErrorKind::io, "cannot open output file `" + *cfg.output_path + "`");
      file << summary.str() << table.str();
      file.flush();
      if (!file) detail::fail(ErrorKind::io, "failed writing output file `" + *cfg.output_path + "`");
      out << summary.str();
    } else {
      out << summary.str() << table.str();
    }
    out.flush();
    return exit_code::ok;
  } catch (const Error& e) {
    err << tool_name << ": " << to_string(e.kind()) << " error: " << e.what() << '\n';
    return exit_code_for(e.kind());
  } catch (const std::exception& e) {
    err << tool_name << ": internal error: " << e.what() << '\n';
    return exit_code::internal;
  }
}

}  // namespace umzi
