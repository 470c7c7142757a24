#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "fsi/runner.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Lagrangian fluid-structure interaction solver"};
  app.require_subcommand(1, 1);
  std::string config;
  for (const auto& name : fsi::subcommands()) {
    auto* sub = app.add_subcommand(name);
    sub->add_option("config", config, "run configuration file")->required()->check(CLI::ExistingFile);
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : fsi::kExitUsage;
  }
  return fsi::run(app.get_subcommands().front()->get_name(), config, std::cout, std::cerr);
}
