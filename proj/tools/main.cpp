#include <CLI11.hpp>
#include <iostream>

#include "cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"rsgame: reflected stochastic differential games toolkit"};
  app.require_subcommand(1);

  bool list_catalog = false;
  CLI::App* catalog = app.add_subcommand("catalog", "list built-in coefficient families");
  catalog->callback([&list_catalog] { list_catalog = true; });

  std::string config_path;
  std::string picked;
  for (const auto& sub : rsg::cli::subcommands()) {
    CLI::App* cmd = app.add_subcommand(sub.name, sub.description);
    cmd->add_option("config", config_path, "JSON experiment config")->required();
    cmd->callback([&picked, name = sub.name] { picked = name; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  if (list_catalog) {
    rsg::cli::print_catalog(std::cout);
    return 0;
  }
  return rsg::cli::run(picked, config_path, std::cout);
}
