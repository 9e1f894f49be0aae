#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "gplp/cli/run.hpp"
#include "gplp/errors.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Symbolic inference for probabilistic logic programs with Gaussian switches"};
  app.require_subcommand(1);

  gplp::RunConfig config;
  std::string grid;
  std::string format = "text";
  auto* run = app.add_subcommand("run", "Answer a query against a program file");
  run->add_option("file", config.program_path, "Program file")->required();
  run->add_option("-q,--query", config.query, "Query goal, e.g. \"widget(X).\"")
      ->required();
  run->add_flag("--normalize", config.normalize, "Normalize the answer");
  run->add_option("--grid", grid, "Evaluate the density on VAR:LO:HI:STEPS");
  run->add_option("--format", format, "Output format")
      ->check(CLI::IsMember({"text", "json", "csv"}));
  run->add_option("--depth", config.depth_limit, "Derivation depth limit")
      ->check(CLI::PositiveNumber);
  run->add_option("--seed", config.seed, "Seed for the sampling check");
  run->add_flag("--check", config.check, "Cross-check against an oracle");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : gplp::exit_code::kProgramError;
  }

  try {
    config.format = gplp::parse_format(format);
    if (!grid.empty()) config.grid = gplp::parse_grid(grid);
  } catch (const gplp::Error& e) {
    std::cerr << '[' << gplp::phase_name(e.phase()) << "] " << e.what() << '\n';
    return gplp::exit_code::kProgramError;
  }
  return gplp::run(config, std::cout, std::cerr);
}
