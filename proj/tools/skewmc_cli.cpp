#include <CLI11.hpp>

#include "skewmc/cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"skewmc: nonreversible MCMC sampling and verification"};
  app.require_subcommand(1);

  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<int> chains;
  int workers = 1;
  std::optional<std::string> out_dir;
  auto* run = app.add_subcommand("run", "run a configured sampler");
  run->add_option("--config", config_path, "run configuration file")->required();
  run->add_option("--seed", seed, "master seed override");
  run->add_option("--chains", chains, "chain count override");
  run->add_option("--workers", workers, "worker pool size");
  run->add_option("--out", out_dir, "output directory override");

  std::string suite;
  std::optional<std::string> chain_file;
  std::uint64_t verify_seed = 20240901;
  std::string verify_out = ".";
  auto* verify = app.add_subcommand("verify", "run a verification suite");
  verify->add_option("suite", suite, "finite | identities | jacobians | stationarity | all")
      ->required();
  verify->add_option("--chain", chain_file, "finite chain file to check (finite suite)");
  verify->add_option("--seed", verify_seed, "suite seed");
  verify->add_option("--out", verify_out, "report directory");

  std::optional<double> c0_L;
  std::optional<int> c0_m;
  auto* c0 = app.add_subcommand("c0", "print the step-bound constant");
  c0->add_option("--L", c0_L, "Lipschitz constant");
  c0->add_option("--m", c0_m, "leapfrog step count");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? skewmc::kExitOk : skewmc::kExitUsage;
  }

  if (run->parsed()) return skewmc::cmd_run(config_path, seed, chains, workers, out_dir);
  if (verify->parsed()) return skewmc::cmd_verify(suite, chain_file, verify_seed, verify_out);
  return skewmc::cmd_c0(c0_L, c0_m);
}
