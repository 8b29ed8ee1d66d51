#pragma once

#include <cstdint>
#include <string>

#include "core/errors.hpp"

namespace mdpsim {

inline constexpr const char* kVersion = "1.0.0";

struct RunOptions {
  std::string subcommand;
  std::string config_path;
  std::string out_dir;  // empty: use the config's output.dir
  bool has_seed_override = false;
  std::uint64_t seed_override = 0;
  unsigned threads_override = 0;  // 0: unset
};

// Executes one subcommand end to end; throws Error on any failure.
// Subcommands: homogenize, simulate, verify-decomposition, tail-bounds,
// mdp-scan, negligibility-scan.
void run_experiment(const RunOptions& options);

// Exit-status convention: 0 success, 2 validation/config error, 3 statistical
// check failure in verify modes.
int exit_code_for(Err code);

}  // namespace mdpsim
