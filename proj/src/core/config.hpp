#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "core/chain.hpp"
#include "core/environment.hpp"

namespace mdpsim {

struct EnvBlock {
  enum class Kind { chain, periodic } kind = Kind::chain;
  ChainSpec chain;                // kind == chain
  std::vector<double> sigma, b;   // kind == periodic
};

struct SimBlock {
  std::vector<double> epsilon;
  double kappa = 0.0;
  double x0 = 0.0;
  double T = 0.0;
  double dt = 0.0;  // 0: automatic step rule
  std::string scheme = "euler";
  bool with_drift = true;
  bool girsanov = false;
  std::string env_mode = "annealed";
  long replicas = 100;
  std::uint64_t cell_budget = 10000000;
};

struct ScanBlock {
  double eta = 0.0;
  std::string estimator = "crude";
  long replicas = 0;
  std::string which = "drift";  // negligibility-scan only
};

struct TailBlock {
  std::vector<double> r, q;
  double horizon = 0.0;
  long replicas = 0;
  std::vector<double> psi;
};

struct DecompBlock {
  std::vector<double> psi;
  double horizon = 0.0;
  long replicas = 0;
};

struct OutputBlock {
  std::string dir = ".";
  long paths = 10;   // number of replicas emitted in full to paths.csv
  long stride = 1;   // grid thinning for paths.csv
};

struct ExperimentConfig {
  std::uint64_t seed = 0;
  std::optional<EnvBlock> environment;
  std::optional<SimBlock> simulation;
  std::optional<ScanBlock> scan;
  std::optional<TailBlock> tail;
  std::optional<DecompBlock> decomposition;
  OutputBlock output;
  std::uint64_t config_hash = 0;
};

// Strict parse: unknown keys anywhere are a hard error naming the key.
ExperimentConfig parse_config(const std::string& json_text);
ExperimentConfig load_config(const std::string& path);

}  // namespace mdpsim
