#include <cstdint>
#include <cstdio>
#include <string>

#include <CLI11.hpp>

#include "lghmc/commands.hpp"
#include "lghmc/errors.hpp"
#include "lghmc/runconfig.hpp"
#include "lghmc/version.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Hamiltonian Monte Carlo on naturally reductive homogeneous spaces"};
  app.set_version_flag("--version", lghmc::kVersion);
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path;
  std::string out_dir;
  std::uint64_t seed = 0;
  int workers = 1;
  auto* config_opt = app.add_option("--config", config_path, "run configuration file");
  auto* seed_opt = app.add_option("--seed", seed, "override hmc.seed");
  auto* out_opt = app.add_option("--out", out_dir, "override output.dir");
  app.add_option("--workers", workers, "concurrent chains for sample")->default_val(1);

  app.add_subcommand("sample", "run HMC chains and write sample CSVs");
  app.add_subcommand("geodesic", "integrate a zero-potential trajectory");
  app.add_subcommand("scan", "step-size scaling studies (|dH| and <dH^2>)");
  app.add_subcommand("exp-bench", "benchmark matrix-exponential strategies");
  app.add_subcommand("validate-space", "check the structural residuals of a space");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return lghmc::kExitConfig;
  }

  lghmc::RunConfig cfg;
  try {
    if (config_opt->count() > 0) cfg = lghmc::load_config_file(config_path);
    if (seed_opt->count() > 0) cfg.hmc.seed = seed;
    if (out_opt->count() > 0) cfg.output_dir = out_dir;
    if (workers < 1) throw lghmc::ConfigError("--workers must be at least 1");
  } catch (const lghmc::ConfigError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return lghmc::kExitConfig;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  return lghmc::run_command(command, cfg, workers);
}
