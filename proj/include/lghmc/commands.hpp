#pragma once

#include <string>

#include "lghmc/runconfig.hpp"

namespace lghmc {

// Exit codes shared by every command.
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitCapability = 3;
inline constexpr int kExitNumerical = 4;

int cmd_sample(const RunConfig& cfg, int workers);
int cmd_geodesic(const RunConfig& cfg);
int cmd_scan(const RunConfig& cfg);
int cmd_exp_bench(const RunConfig& cfg);
int cmd_validate_space(const RunConfig& cfg);

// Runs a command and maps thrown errors onto exit codes (2 config,
// 3 capability, 4 numerical/other).
int run_command(const std::string& command, const RunConfig& cfg, int workers);

}  // namespace lghmc
