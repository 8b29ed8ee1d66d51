#include "core/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

#include "core/errors.hpp"

namespace mdpsim {

namespace {

using nlohmann::json;

void require_keys(const json& obj, const std::string& where, const std::set<std::string>& known) {
  if (!obj.is_object()) fail(Err::config_error, where + " must be a JSON object");
  for (auto it = obj.begin(); it != obj.end(); ++it)
    if (!known.count(it.key()))
      fail(Err::config_error, "unknown key '" + it.key() + "' in " + where);
}

double get_number(const json& obj, const std::string& where, const std::string& key) {
  if (!obj.contains(key)) fail(Err::config_error, where + " is missing '" + key + "'");
  const auto& v = obj.at(key);
  if (!v.is_number()) fail(Err::config_error, where + "." + key + " must be a number");
  return v.get<double>();
}

double get_number(const json& obj, const std::string& where, const std::string& key,
                  double fallback) {
  return obj.contains(key) ? get_number(obj, where, key) : fallback;
}

long get_integer(const json& obj, const std::string& where, const std::string& key,
                 long fallback) {
  if (!obj.contains(key)) return fallback;
  const auto& v = obj.at(key);
  if (!v.is_number_integer()) fail(Err::config_error, where + "." + key + " must be an integer");
  return v.get<long>();
}

bool get_bool(const json& obj, const std::string& where, const std::string& key, bool fallback) {
  if (!obj.contains(key)) return fallback;
  const auto& v = obj.at(key);
  if (!v.is_boolean()) fail(Err::config_error, where + "." + key + " must be a boolean");
  return v.get<bool>();
}

std::string get_string(const json& obj, const std::string& where, const std::string& key,
                       const std::string& fallback) {
  if (!obj.contains(key)) return fallback;
  const auto& v = obj.at(key);
  if (!v.is_string()) fail(Err::config_error, where + "." + key + " must be a string");
  return v.get<std::string>();
}

std::vector<double> get_vector(const json& obj, const std::string& where,
                               const std::string& key) {
  if (!obj.contains(key)) fail(Err::config_error, where + " is missing '" + key + "'");
  const auto& v = obj.at(key);
  if (!v.is_array() || v.empty())
    fail(Err::config_error, where + "." + key + " must be a nonempty array of numbers");
  std::vector<double> out;
  out.reserve(v.size());
  for (const auto& x : v) {
    if (!x.is_number()) fail(Err::config_error, where + "." + key + " must contain numbers only");
    out.push_back(x.get<double>());
  }
  return out;
}

EnvBlock parse_environment(const json& obj) {
  EnvBlock env;
  const std::string kind = get_string(obj, "environment", "kind", "");
  if (kind == "chain") {
    require_keys(obj, "environment", {"kind", "states", "generator", "observable"});
    env.kind = EnvBlock::Kind::chain;
    env.chain.states = get_vector(obj, "environment", "states");
    env.chain.observable = get_vector(obj, "environment", "observable");
    if (!obj.contains("generator") || !obj.at("generator").is_array())
      fail(Err::config_error, "environment.generator must be an array of rows");
    const auto& rows = obj.at("generator");
    const std::size_t m = env.chain.states.size();
    if (rows.size() != m)
      fail(Err::config_error, "environment.generator must have one row per state");
    env.chain.generator = Matrix(m, m);
    for (std::size_t i = 0; i < m; ++i) {
      const auto& row = rows.at(i);
      if (!row.is_array() || row.size() != m)
        fail(Err::config_error,
             "environment.generator row " + std::to_string(i) + " must have " +
                 std::to_string(m) + " entries");
      for (std::size_t j = 0; j < m; ++j) {
        if (!row.at(j).is_number())
          fail(Err::config_error, "environment.generator entries must be numbers");
        env.chain.generator(i, j) = row.at(j).get<double>();
      }
    }
  } else if (kind == "periodic") {
    require_keys(obj, "environment", {"kind", "sigma", "b"});
    env.kind = EnvBlock::Kind::periodic;
    env.sigma = get_vector(obj, "environment", "sigma");
    env.b = get_vector(obj, "environment", "b");
    if (env.b.size() == 1 && env.sigma.size() > 1) env.b.assign(env.sigma.size(), env.b[0]);
    if (env.sigma.size() == 1 && env.b.size() > 1)
      env.sigma.assign(env.b.size(), env.sigma[0]);
    if (env.sigma.size() != env.b.size())
      fail(Err::config_error, "environment.sigma and environment.b must have equal length");
  } else {
    fail(Err::config_error, "environment.kind must be 'chain' or 'periodic'");
  }
  return env;
}

SimBlock parse_simulation(const json& obj) {
  require_keys(obj, "simulation",
               {"epsilon", "kappa", "x0", "T", "dt", "scheme", "with_drift", "girsanov",
                "env_mode", "replicas", "cell_budget"});
  SimBlock sim;
  sim.epsilon = get_vector(obj, "simulation", "epsilon");
  sim.kappa = get_number(obj, "simulation", "kappa");
  sim.x0 = get_number(obj, "simulation", "x0", 0.0);
  sim.T = get_number(obj, "simulation", "T");
  sim.dt = get_number(obj, "simulation", "dt", 0.0);
  sim.scheme = get_string(obj, "simulation", "scheme", "euler");
  sim.with_drift = get_bool(obj, "simulation", "with_drift", true);
  sim.girsanov = get_bool(obj, "simulation", "girsanov", false);
  sim.env_mode = get_string(obj, "simulation", "env_mode", "annealed");
  sim.replicas = get_integer(obj, "simulation", "replicas", 100);
  sim.cell_budget = static_cast<std::uint64_t>(
      get_integer(obj, "simulation", "cell_budget", 10000000));
  if (sim.scheme != "euler" && sim.scheme != "timechange")
    fail(Err::config_error, "simulation.scheme must be 'euler' or 'timechange'");
  if (sim.env_mode != "annealed" && sim.env_mode != "quenched")
    fail(Err::config_error, "simulation.env_mode must be 'annealed' or 'quenched'");
  if (sim.replicas <= 0) fail(Err::config_error, "simulation.replicas must be positive");
  return sim;
}

ScanBlock parse_scan(const json& obj) {
  require_keys(obj, "scan", {"eta", "estimator", "replicas", "which"});
  ScanBlock scan;
  scan.eta = get_number(obj, "scan", "eta");
  scan.estimator = get_string(obj, "scan", "estimator", "crude");
  scan.replicas = get_integer(obj, "scan", "replicas", 0);
  scan.which = get_string(obj, "scan", "which", "drift");
  if (scan.estimator != "crude" && scan.estimator != "tilted")
    fail(Err::config_error, "scan.estimator must be 'crude' or 'tilted'");
  if (scan.which != "drift" && scan.which != "diffusion")
    fail(Err::config_error, "scan.which must be 'drift' or 'diffusion'");
  if (scan.replicas <= 0) fail(Err::config_error, "scan.replicas must be positive");
  return scan;
}

TailBlock parse_tail(const json& obj) {
  require_keys(obj, "tail", {"r", "q", "U", "replicas", "psi"});
  TailBlock tail;
  tail.r = get_vector(obj, "tail", "r");
  tail.q = get_vector(obj, "tail", "q");
  tail.horizon = get_number(obj, "tail", "U");
  tail.replicas = get_integer(obj, "tail", "replicas", 0);
  tail.psi = get_vector(obj, "tail", "psi");
  if (tail.replicas <= 0) fail(Err::config_error, "tail.replicas must be positive");
  return tail;
}

DecompBlock parse_decomposition(const json& obj) {
  require_keys(obj, "decomposition", {"psi", "U", "replicas"});
  DecompBlock dec;
  dec.psi = get_vector(obj, "decomposition", "psi");
  dec.horizon = get_number(obj, "decomposition", "U");
  dec.replicas = get_integer(obj, "decomposition", "replicas", 0);
  if (dec.replicas <= 0) fail(Err::config_error, "decomposition.replicas must be positive");
  return dec;
}

OutputBlock parse_output(const json& obj) {
  require_keys(obj, "output", {"dir", "paths", "stride"});
  OutputBlock out;
  out.dir = get_string(obj, "output", "dir", ".");
  out.paths = get_integer(obj, "output", "paths", 10);
  out.stride = get_integer(obj, "output", "stride", 1);
  if (out.paths < 0 || out.stride < 1) fail(Err::config_error, "output.paths/stride out of range");
  return out;
}

std::uint64_t fnv1a(const std::string& text) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

}  // namespace

ExperimentConfig parse_config(const std::string& json_text) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const std::exception& e) {
    fail(Err::config_error, std::string("config is not valid JSON: ") + e.what());
  }
  require_keys(root, "config",
               {"seed", "environment", "simulation", "scan", "tail", "decomposition", "output"});

  ExperimentConfig cfg;
  cfg.config_hash = fnv1a(json_text);
  if (root.contains("seed")) {
    const auto& s = root.at("seed");
    if (!s.is_number_integer() || s.get<long long>() < 0)
      fail(Err::config_error, "seed must be a nonnegative integer");
    cfg.seed = s.get<std::uint64_t>();
  }
  if (root.contains("environment")) cfg.environment = parse_environment(root.at("environment"));
  if (root.contains("simulation")) cfg.simulation = parse_simulation(root.at("simulation"));
  if (root.contains("scan")) cfg.scan = parse_scan(root.at("scan"));
  if (root.contains("tail")) cfg.tail = parse_tail(root.at("tail"));
  if (root.contains("decomposition"))
    cfg.decomposition = parse_decomposition(root.at("decomposition"));
  if (root.contains("output")) cfg.output = parse_output(root.at("output"));
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(Err::io_error, "cannot read config file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

}  // namespace mdpsim
