#include "r2a/pipeline.hpp"

#include "CLI11.hpp"

#include <string>

int main(int argc, char** argv) {
  CLI::App app{"rationale-to-attention transfer pipeline"};
  app.require_subcommand(1);

  std::string config_path;
  for (const std::string& name : r2a::cli::kCommands) {
    CLI::App* sub = app.add_subcommand(name);
    sub->add_option("-c,--config", config_path, "run configuration file")->required();
  }

  CLI11_PARSE(app, argc, argv);
  return r2a::cli::run(app.get_subcommands().front()->get_name(), config_path);
}
