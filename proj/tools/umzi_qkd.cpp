// umzi-qkd: secret-key rate of phase-coding BB84 with a lossy long-arm
// phase modulator.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "umzi/umzi.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Secret-key rate of phase-coding BB84 with a lossy phase modulator"};
  app.set_version_flag("--version", std::string(umzi::tool_name) + " " + umzi::tool_version);

  std::string command;
  std::string config_path;
  app.add_option("command", command, "eval | sweep | maxdist | optimize");
  app.add_option("--config", config_path, "flat `key = value` config file");

  std::vector<std::pair<std::string, std::string>> flag_values;
  std::vector<std::string> values(std::size(umzi::detail::config_keys));
  for (std::size_t i = 0; i < values.size(); ++i) {
    const auto& spec = umzi::detail::config_keys[i];
    app.add_option(std::string("--") + spec.key, values[i], std::string("default ") + spec.default_value);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : umzi::exit_code::validation;
  }

  umzi::CliOverrides overrides;
  if (!command.empty()) overrides.command = command;
  for (std::size_t i = 0; i < values.size(); ++i) {
    const auto& spec = umzi::detail::config_keys[i];
    if (app.count(std::string("--") + spec.key) > 0) overrides.values.emplace_back(spec.key, values[i]);
  }

  std::string file_text;
  if (!config_path.empty()) {
    std::ifstream in(config_path, std::ios::binary);
    if (!in) {
      std::cerr << umzi::tool_name << ": io error: cannot read config `" << config_path << "`\n";
      return umzi::exit_code::io;
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    file_text = buf.str();
  }

  umzi::RunConfig config;
  try {
    config = umzi::parse_config(file_text, overrides);
  } catch (const umzi::Error& e) {
    std::cerr << umzi::tool_name << ": " << umzi::to_string(e.kind()) << " error: " << e.what() << '\n';
    return umzi::exit_code_for(e.kind());
  }
  return umzi::run(config, std::cout, std::cerr);
}
