// qwalk: p-diluted discrete-time quantum walk simulator.
//
//   qwalk <command> --config run.cfg [--seed N] [--threads N] [--out DIR]
//
// Commands: evolve, ensemble, beta, crossing, two-photon, hom, gen-maps.

#include <iostream>
#include <map>
#include <string>

#include "CLI11.hpp"
#include "qwalk/io/commands.hpp"
#include "qwalk/io/manifest.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Disordered discrete-time quantum walk simulator"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(qwalk::io::tool_version()));

  qwalk::io::CommandOptions options;
  std::string config;
  std::uint64_t seed = 0;
  unsigned threads = 0;
  std::string out_dir;
  std::string map_path;

  const std::map<std::string, std::string> help{
      {"evolve", "Position distribution per step for one phase map"},
      {"ensemble", "Mean/std of the variance over many phase maps per p"},
      {"beta", "Power-law exponent of the variance per p"},
      {"crossing", "Similarity scan over p and crossing points"},
      {"two-photon", "Two-photon coincidence matrices and pair-mean variance"},
      {"hom", "Hong-Ou-Mandel coincidence dip versus delay"},
      {"gen-maps", "Write phase-map files"},
  };

  for (std::string_view name : qwalk::io::command_names()) {
    CLI::App* sub = app.add_subcommand(std::string(name), help.at(std::string(name)));
    sub->add_option("--config", config, "Configuration file (key = value)")->required()->check(CLI::ExistingFile);
    sub->add_option("--seed", seed, "Override the master seed");
    sub->add_option("--threads", threads, "Worker threads (results do not depend on it)");
    sub->add_option("--out", out_dir, "Override the output directory");
    if (name == "evolve") {
      sub->add_option("--map", map_path, "Evolve under this phase-map file")->check(CLI::ExistingFile);
    }
  }

  CLI11_PARSE(app, argc, argv);

  CLI::App* chosen = app.get_subcommands().front();
  options.config_path = config;
  if (chosen->count("--seed")) options.seed = seed;
  if (chosen->count("--threads")) options.threads = threads;
  if (chosen->count("--out")) options.out_dir = out_dir;
  if (chosen->get_name() == "evolve" && chosen->count("--map")) options.map_path = map_path;

  return qwalk::io::run_command(chosen->get_name(), options, std::cout, std::cerr);
}
