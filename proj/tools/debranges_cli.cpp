#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "debranges/run.hpp"

int main(int argc, char** argv) {
  using namespace debranges;

  CLI::App app{"Spaces of entire functions with imposed zeros: kernels, structure functions, identity checks"};
  std::string config_path;
  std::string output_path;
  std::uint64_t seed = 0;
  bool list_checks = false;
  auto* config_opt = app.add_option("--config", config_path, "JSON run configuration");
  auto* output_opt = app.add_option("--output", output_path, "Output path (overrides the config)");
  auto* seed_opt = app.add_option("--seed", seed, "Sampling seed (overrides the config)");
  app.add_flag("--list-checks", list_checks, "Print the verification check ids and exit");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfigError;
  }

  if (list_checks) {
    for (const auto& id : check_ids()) std::cout << id << '\n';
    return kExitOk;
  }
  if (config_opt->count() == 0) {
    std::cerr << "error: --config is required\n";
    return kExitConfigError;
  }

  std::ifstream in(config_path);
  if (!in) {
    std::cerr << "error: cannot read config '" << config_path << "'\n";
    return kExitConfigError;
  }
  std::stringstream buffer;
  buffer << in.rdbuf();

  RunConfig config;
  try {
    config = parse_config(buffer.str());
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfigError;
  }
  if (output_opt->count() > 0) config.output_path = output_path;
  if (seed_opt->count() > 0) config.seed = seed;

  return run(config, std::cout, std::cerr);
}
