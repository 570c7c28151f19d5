#include <fstream>
#include <iostream>
#include <map>

#include "CLI11.hpp"
#include "commands.hpp"
#include "run_config.hpp"

using namespace tpbcli;

int main(int argc, char** argv)
{
  CLI::App app{"Bessel and Hankel functions near the turning point: accuracy experiments"};
  app.set_help_flag("-h,--help");

  std::map<std::string, std::string> raw;
  std::vector<std::string> zs;
  std::string config_path;
  bool compute = false, print_config = false;
  for (const auto& key : config_keys()) {
    if (key == "compute-oracle" || key == "z") continue;
    app.add_option("--" + key, raw[key]);
  }
  app.add_option("--z", zs, "evaluation point(s) re,im; repeat or separate with ';'");
  app.add_flag("--compute-oracle", compute, "compute oracle values absent from the cache");
  app.add_option("--config", config_path, "flat key = value file; flags override it");
  app.add_flag("--print-config", print_config, "print the effective configuration and exit");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kConfigError;
  }

  Settings flags;
  for (const auto& key : config_keys()) {
    if (key == "compute-oracle" || key == "z") continue;
    if (app.count("--" + key)) flags.emplace_back(key, raw[key]);
  }
  if (!zs.empty()) {
    std::string joined;
    for (const auto& z : zs) joined += (joined.empty() ? "" : ";") + z;
    flags.emplace_back("z", joined);
  }
  if (compute) flags.emplace_back("compute-oracle", "true");

  RunConfig cfg;
  try {
    Settings file;
    if (!config_path.empty()) file = read_config_file(config_path);
    cfg = build_config(file, flags);
  } catch (const config_error& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfigError;
  }

  if (print_config) {
    for (const auto& [k, v] : describe(cfg)) std::cout << k << " = " << v << "\n";
    return kOk;
  }

  if (cfg.output.empty() || cfg.output == "-") return run_command(cfg, std::cout, std::cerr);
  std::ofstream out(cfg.output, std::ios::binary);
  if (!out) {
    std::cerr << "config error: cannot write " << cfg.output << "\n";
    return kConfigError;
  }
  return run_command(cfg, out, std::cerr);
}
