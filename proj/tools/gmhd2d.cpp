// Command-line front end: run, sweep, kernel, inspect.
#include <CLI11.hpp>

#include <iostream>

#include "gmhd/harness.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Pseudo-spectral solver and kernel lab for 2D MHD with fractional dissipation"};
  app.require_subcommand(1);

  std::string config;
  std::string out_dir;
  int workers = 0;
  std::uint64_t seed = 0;
  std::string checkpoint;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--config", config, "configuration file")->required();
    cmd->add_option("--out", out_dir, "output directory (overrides output.directory)");
  };
  CLI::App* run = app.add_subcommand("run", "run one simulation");
  add_common(run);
  run->add_option("--seed", seed, "initial-condition seed (overrides ic.seed)");
  CLI::App* sweep = app.add_subcommand("sweep", "run a parameter grid");
  add_common(sweep);
  sweep->add_option("--workers", workers, "concurrent cells (fallback: GMHD2D_WORKERS)")
      ->check(CLI::PositiveNumber);
  sweep->add_option("--seed", seed, "initial-condition seed (overrides ic.seed)");
  CLI::App* kernel = app.add_subcommand("kernel", "kernel tables and L1 bounds");
  add_common(kernel);
  CLI::App* inspect = app.add_subcommand("inspect", "print a checkpoint header");
  inspect->add_option("checkpoint", checkpoint, "checkpoint file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : gmhd::kExitUsage;
  }

  gmhd::CliOverrides cli;
  if (!out_dir.empty()) cli.out_dir = out_dir;
  if (workers > 0) cli.workers = workers;
  if (app.got_subcommand(run) && run->count("--seed")) cli.seed = seed;
  if (app.got_subcommand(sweep) && sweep->count("--seed")) cli.seed = seed;

  if (app.got_subcommand(run)) return gmhd::cmd_run(config, cli, std::cout, std::cerr);
  if (app.got_subcommand(sweep)) return gmhd::cmd_sweep(config, cli, std::cout, std::cerr);
  if (app.got_subcommand(kernel)) return gmhd::cmd_kernel(config, cli, std::cout, std::cerr);
  return gmhd::cmd_inspect(checkpoint, std::cout, std::cerr);
}
