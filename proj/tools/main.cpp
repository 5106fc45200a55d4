#include <CLI11.hpp>

#include <cstdint>
#include <iostream>
#include <string>

#include "sincmbe/commands.hpp"

int main(int argc, char** argv) {
  CLI::App app{
      "sincmbe: pseudo-spectral solvers for sinc-type and classical MBE "
      "gradient flows on the periodic torus"};
  app.require_subcommand(1);

  std::string config_path, config_path_b;
  sincmbe::CliOverrides overrides;
  std::string output_dir;
  std::int64_t record_every = 0, snapshot_every = 0;
  std::uint64_t seed = 0;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--output-dir", output_dir,
                    "Override the config's output directory");
    cmd->add_option("--record-every", record_every,
                    "Override the energy record cadence (steps)");
    cmd->add_option("--snapshot-every", snapshot_every,
                    "Override the snapshot cadence (steps, 0 = never)");
    cmd->add_option("--seed", seed, "Override the random IC seed");
  };

  CLI::App* simulate =
      app.add_subcommand("simulate", "Run one simulation from a config file");
  simulate->add_option("config", config_path, "Config file")->required();
  add_common(simulate);

  CLI::App* compare = app.add_subcommand(
      "compare", "Run two configs from the first one's initial datum");
  compare->add_option("config_a", config_path, "First config")->required();
  compare->add_option("config_b", config_path_b, "Second config")->required();
  add_common(compare);

  CLI::App* sweep = app.add_subcommand(
      "sweep", "Bracket the critical time step over the config's tau list");
  sweep->add_option("config", config_path, "Config file with a [sweep] section")
      ->required();
  add_common(sweep);

  sincmbe::VerifyOptions verify_opts;
  CLI::App* verify = app.add_subcommand(
      "verify", "Certify the lemma, multiplier, and recurrence bounds");
  verify->add_option("--samples", verify_opts.samples,
                     "Random samples for the lemma checks");
  verify->add_option("--seed", verify_opts.seed, "RNG seed for the checks");
  verify->add_option("--grid", verify_opts.grid_n,
                     "Grid resolution for the multiplier checks");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    // --help lands here with exit code 0; real parse errors map to 1.
    const int code = app.exit(e);
    return code == 0 ? sincmbe::kExitOk : sincmbe::kExitUsage;
  }

  auto collect = [&](const CLI::App* cmd) {
    if (cmd->count("--output-dir") > 0) overrides.output_dir = output_dir;
    if (cmd->count("--record-every") > 0) overrides.record_every = record_every;
    if (cmd->count("--snapshot-every") > 0) {
      overrides.snapshot_every = snapshot_every;
    }
    if (cmd->count("--seed") > 0) overrides.seed = seed;
  };

  if (simulate->parsed()) {
    collect(simulate);
    return sincmbe::cmd_simulate(config_path, overrides);
  }
  if (compare->parsed()) {
    collect(compare);
    return sincmbe::cmd_compare(config_path, config_path_b, overrides);
  }
  if (sweep->parsed()) {
    collect(sweep);
    return sincmbe::cmd_sweep(config_path, overrides);
  }
  if (verify->parsed()) {
    return sincmbe::cmd_verify(verify_opts);
  }
  std::cerr << "error: no subcommand\n";
  return sincmbe::kExitUsage;
}
