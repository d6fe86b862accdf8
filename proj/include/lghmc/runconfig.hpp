#pragma once

#include <string>
#include <vector>

#include "lghmc/sampler.hpp"

namespace lghmc {

// Flat `section.key = value` run configuration shared by every command.
struct RunConfig {
  std::string space_name = "s2";
  int space_n = 0;  // only used by parametrized spaces (sphere-n)
  std::string potential_name = "none";

  HmcConfig hmc;  // includes the exponential engine settings
  int n_chains = 1;

  std::string output_dir = ".";
  bool write_csv = true;
  bool write_json = true;

  std::vector<double> scan_step_sizes = {0.1, 0.05, 0.025, 0.0125};
  std::vector<double> geodesic_momentum;  // horizontal coefficients; empty = e_1 direction

  std::vector<int> bench_dims = {3, 4, 5};
  int bench_n_random = 200;
  double bench_max_norm = 5.0;
};

RunConfig parse_config(const std::string& text);
RunConfig load_config_file(const std::string& path);

// Canonical form: every key, fixed order, 17-significant-digit reals.
std::string serialize_config(const RunConfig& cfg);

std::string integrator_name(Integrator integrator);
std::string strategy_name(ExpStrategy strategy);

}  // namespace lghmc
