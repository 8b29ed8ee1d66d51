#include "core/runner.hpp"

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <memory>
#include <sstream>
#include <vector>

#include "core/chain_algebra.hpp"
#include "core/config.hpp"
#include "core/environment.hpp"
#include "core/homogenize.hpp"
#include "core/martingale.hpp"
#include "core/mdp.hpp"
#include "core/parallel.hpp"
#include "core/sde.hpp"
#include "core/stats.hpp"

namespace mdpsim {

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string fmt(long v) { return std::to_string(v); }

struct Context {
  ExperimentConfig cfg;
  std::string subcommand;
  std::filesystem::path out_dir;
  std::uint64_t seed = 0;
  unsigned threads = 0;
};

void write_csv(const Context& ctx, const std::string& filename, const std::string& header,
               const std::vector<std::string>& rows,
               const std::vector<std::string>& summary = {}) {
  const auto path = ctx.out_dir / filename;
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(Err::io_error, "cannot write " + path.string());
  char meta[128];
  std::snprintf(meta, sizeof(meta), "# config_hash=%016llx",
                static_cast<unsigned long long>(ctx.cfg.config_hash));
  out << "# mdpsim " << kVersion << "\n";
  out << "# subcommand=" << ctx.subcommand << "\n";
  out << meta << "\n";
  out << "# seed=" << ctx.seed << "\n";
  for (const auto& line : summary) out << "# " << line << "\n";
  out << header << "\n";
  for (const auto& row : rows) out << row << "\n";
  if (!out) fail(Err::io_error, "failed while writing " + path.string());
}

const EnvBlock& need_environment(const Context& ctx) {
  if (!ctx.cfg.environment) fail(Err::config_error, "this subcommand needs an environment block");
  return *ctx.cfg.environment;
}

const SimBlock& need_simulation(const Context& ctx) {
  if (!ctx.cfg.simulation) fail(Err::config_error, "this subcommand needs a simulation block");
  return *ctx.cfg.simulation;
}

PeriodicEnv make_periodic(const EnvBlock& env) { return PeriodicEnv(env.sigma, env.b); }

std::unique_ptr<EnvProvider> make_provider(const Context& ctx, const EnvBlock& env,
                                           const SimBlock& sim) {
  if (env.kind == EnvBlock::Kind::chain) {
    const bool quenched = sim.env_mode == "quenched";
    return std::make_unique<ChainEnvProvider>(env.chain, quenched,
                                              derive_stream(ctx.seed, 0xE57, 0, 0),
                                              sim.cell_budget);
  }
  return std::make_unique<PeriodicEnvProvider>(make_periodic(env));
}

HomogenizedCoefficients coefficients_for(const EnvBlock& env) {
  if (env.kind == EnvBlock::Kind::chain) return homogenize_chain(env.chain);
  return homogenize_periodic(make_periodic(env));
}

// --- homogenize ------------------------------------------------------------

void run_homogenize(const Context& ctx) {
  const EnvBlock& env = need_environment(ctx);
  std::vector<std::string> rows;
  if (env.kind == EnvBlock::Kind::chain) {
    const auto pi = stationary_dist(env.chain);
    const auto coeffs = homogenize_chain(env.chain, pi);
    rows.push_back("b_eff,," + fmt(coeffs.b_eff));
    rows.push_back("a_eff,," + fmt(coeffs.a_eff));
    for (std::size_t i = 0; i < pi.size(); ++i)
      rows.push_back("pi," + std::to_string(i) + "," + fmt(pi[i]));
    const struct {
      const char* tag;
      CenteredObservable f;
    } thetas[] = {{"drift", drift_theta(env.chain, pi)},
                  {"diffusion", diffusion_theta(env.chain, pi)}};
    for (const auto& th : thetas) {
      const auto dec = solve_poisson(env.chain, pi, th.f);
      for (std::size_t i = 0; i < dec.h.size(); ++i)
        rows.push_back(std::string("h_") + th.tag + "," + std::to_string(i) + "," +
                       fmt(dec.h[i]));
      rows.push_back(std::string("K_") + th.tag + ",," + fmt(dec.jump_bound));
      for (std::size_t i = 0; i < dec.qv.size(); ++i)
        rows.push_back(std::string("m_") + th.tag + "," + std::to_string(i) + "," +
                       fmt(dec.qv[i]));
    }
  } else {
    const auto coeffs = coefficients_for(env);
    rows.push_back("b_eff,," + fmt(coeffs.b_eff));
    rows.push_back("a_eff,," + fmt(coeffs.a_eff));
    rows.push_back("quad_error,," + fmt(coeffs.quad_error));
  }
  write_csv(ctx, "homogenize.csv", "quantity,state,value", rows);
}

// --- simulate ----------------------------------------------------------------

void run_simulate(const Context& ctx) {
  const EnvBlock& env = need_environment(ctx);
  const SimBlock& sim = need_simulation(ctx);
  const bool timechange = sim.scheme == "timechange";
  if (timechange && sim.with_drift)
    fail(Err::config_error,
         "the timechange scheme is driftless; set simulation.with_drift=false "
         "(compose with girsanov weights for the with-drift law)");
  if (sim.girsanov && sim.with_drift)
    fail(Err::config_error, "girsanov weights apply to driftless simulations only");
  if (timechange && env.kind != EnvBlock::Kind::chain)
    fail(Err::config_error, "the timechange scheme needs a chain environment");

  auto provider = make_provider(ctx, env, sim);

  struct Row {
    double x_terminal = 0, log_weight = 0;
    std::vector<double> times, values;  // captured for emitted replicas only
  };

  const long n = sim.replicas;
  std::vector<std::string> path_rows, terminal_rows;
  for (std::size_t ie = 0; ie < sim.epsilon.size(); ++ie) {
    SimulationParams p;
    p.epsilon = sim.epsilon[ie];
    p.kappa = sim.kappa;
    p.x0 = sim.x0;
    p.T = sim.T;
    p.dt = sim.dt;

    std::vector<Row> results(static_cast<std::size_t>(n));
    parallel_for(static_cast<std::size_t>(n), ctx.threads, [&](std::size_t i) {
      auto e = provider->acquire(derive_stream(ctx.seed, ie, i, 0));
      Rng rng(derive_stream(ctx.seed, ie, i, 1));
      DiffusionPath path = timechange ? simulate_timechange(p, *e, rng)
                                      : simulate_euler(p, *e, rng, sim.with_drift);
      Row& r = results[i];
      r.x_terminal = path.values.back();
      if (sim.girsanov) r.log_weight = girsanov_log_weight(path, p, *e);
      if (static_cast<long>(i) < ctx.cfg.output.paths) {
        r.times = std::move(path.times);
        r.values = std::move(path.values);
      }
    });

    const std::string eps_s = fmt(p.epsilon);
    for (std::size_t i = 0; i < results.size(); ++i) {
      const Row& r = results[i];
      std::string line = eps_s + "," + std::to_string(i) + "," + fmt(r.x_terminal);
      if (sim.girsanov) line += "," + fmt(r.log_weight);
      terminal_rows.push_back(std::move(line));
      if (!r.times.empty()) {
        const std::size_t stride = static_cast<std::size_t>(ctx.cfg.output.stride);
        for (std::size_t k = 0; k < r.times.size(); k += stride)
          path_rows.push_back(eps_s + "," + std::to_string(i) + "," + fmt(r.times[k]) + "," +
                              fmt(r.values[k]));
        if ((r.times.size() - 1) % stride != 0)
          path_rows.push_back(eps_s + "," + std::to_string(i) + "," + fmt(r.times.back()) +
                              "," + fmt(r.values.back()));
      }
    }
  }

  write_csv(ctx, "paths.csv", "epsilon,replica,t,x", path_rows);
  write_csv(ctx, "terminal.csv",
            sim.girsanov ? "epsilon,replica,x_T,log_weight" : "epsilon,replica,x_T",
            terminal_rows);
}

// --- verify-decomposition ----------------------------------------------------

void run_verify_decomposition(const Context& ctx) {
  const EnvBlock& env = need_environment(ctx);
  if (env.kind != EnvBlock::Kind::chain)
    fail(Err::config_error, "verify-decomposition needs a chain environment");
  if (!ctx.cfg.decomposition)
    fail(Err::config_error, "verify-decomposition needs a decomposition block");
  const DecompBlock& blk = *ctx.cfg.decomposition;

  const auto pi = stationary_dist(env.chain);
  const auto f = center(env.chain, pi, blk.psi);
  const auto dec = solve_poisson(env.chain, pi, f);
  const double expected_qv_rate = dot(pi, dec.qv);

  const long n = blk.replicas;
  std::vector<DecompositionCheck> checks(static_cast<std::size_t>(n));
  parallel_for(static_cast<std::size_t>(n), ctx.threads, [&](std::size_t i) {
    checks[i] =
        verify_decomposition_walk(env.chain, pi, f, dec, blk.horizon, derive_stream(ctx.seed, i));
  });

  double max_resid = 0.0, max_jump = 0.0;
  Accumulator m_acc;
  std::vector<std::string> rows;
  rows.reserve(checks.size());
  for (std::size_t i = 0; i < checks.size(); ++i) {
    const auto& c = checks[i];
    max_resid = std::max(max_resid, c.identity_residual);
    max_jump = std::max(max_jump, c.max_jump);
    m_acc.add(c.m_horizon);
    rows.push_back(std::to_string(i) + "," + fmt(c.identity_residual) + "," + fmt(c.max_jump) +
                   "," + fmt(c.m_horizon) + "," + fmt(c.qv_horizon));
  }

  const double var_rate = m_acc.variance() / blk.horizon;
  // sampling error of a variance estimate, Gaussian approximation
  const double var_se = expected_qv_rate * std::sqrt(2.0 / (static_cast<double>(n) - 1.0));
  const double mean_se = m_acc.stderr_mean();

  std::vector<std::string> summary = {
      "max_identity_residual=" + fmt(max_resid),
      "max_jump=" + fmt(max_jump) + " jump_bound=" + fmt(dec.jump_bound),
      "mean_m=" + fmt(m_acc.mean()) + " se=" + fmt(mean_se),
      "var_m_over_u=" + fmt(var_rate) + " expected=" + fmt(expected_qv_rate) +
          " se=" + fmt(var_se),
  };
  write_csv(ctx, "decomposition.csv", "replica,identity_residual,max_jump,m_horizon,qv_horizon",
            rows, summary);

  if (max_resid > 1e-10)
    fail(Err::stat_check_failed, "decomposition identity residual exceeds 1e-10");
  if (max_jump > dec.jump_bound + 1e-12)
    fail(Err::stat_check_failed, "martingale jump exceeded the jump bound");
  if (std::abs(m_acc.mean()) > 3.0 * mean_se && mean_se > 0.0)
    fail(Err::stat_check_failed, "martingale sample mean is off zero by more than 3 SE");
  if (std::abs(var_rate - expected_qv_rate) > 3.0 * var_se)
    fail(Err::stat_check_failed,
         "martingale variance rate disagrees with the QV density by more than 3 SE");
}

// --- tail-bounds ---------------------------------------------------------------

void run_tail_bounds(const Context& ctx) {
  const EnvBlock& env = need_environment(ctx);
  if (env.kind != EnvBlock::Kind::chain)
    fail(Err::config_error, "tail-bounds needs a chain environment");
  if (!ctx.cfg.tail) fail(Err::config_error, "tail-bounds needs a tail block");
  const TailBlock& blk = *ctx.cfg.tail;

  const auto pi = stationary_dist(env.chain);
  const auto f = center(env.chain, pi, blk.psi);
  const auto dec = solve_poisson(env.chain, pi, f);

  const auto batch = tail_walk_batch(env.chain, pi, f, dec, blk.horizon, blk.replicas,
                                     derive_stream(ctx.seed, 0x7A1L), ctx.threads);

  bool any_violated = false;
  std::vector<std::string> rows;
  for (double r : blk.r)
    for (double q : blk.q) {
      const TailCell cell = evaluate_tail_cell(batch, r, q, dec.jump_bound);
      any_violated = any_violated || cell.violated;
      rows.push_back(fmt(cell.r) + "," + fmt(cell.q) + "," + fmt(cell.jump_bound) + "," +
                     fmt(cell.n) + "," + fmt(cell.freq) + "," + fmt(cell.ucl99) + "," +
                     fmt(cell.bound) + "," + (cell.violated ? "1" : "0"));
    }
  write_csv(ctx, "tail_bounds.csv", "r,q,K,n,freq,ucl99,bound,violated", rows);
  if (any_violated)
    fail(Err::stat_check_failed, "empirical tail frequency significantly exceeds the bound");
}

// --- scans ---------------------------------------------------------------------

std::string scan_row_csv(const ScanRow& row) {
  return fmt(row.epsilon) + "," + fmt(row.kappa) + "," + fmt(row.eta) + "," + row.estimator +
         "," + fmt(row.n) + "," + fmt(row.p_hat) + "," + fmt(row.stderr_p) + "," +
         fmt(row.neg_rate) + "," + fmt(row.predicted_rate) + "," + row.regime_flag;
}

ScanConfig make_scan_config(const Context& ctx, const SimBlock& sim, const ScanBlock& scan) {
  ScanConfig cfg;
  cfg.epsilons = sim.epsilon;
  cfg.kappa = sim.kappa;
  cfg.x0 = sim.x0;
  cfg.T = sim.T;
  cfg.dt = sim.dt;
  cfg.eta = scan.eta;
  cfg.replicas = scan.replicas;
  cfg.seed = ctx.seed;
  cfg.threads = ctx.threads;
  return cfg;
}

void run_mdp_scan(const Context& ctx) {
  const EnvBlock& env = need_environment(ctx);
  const SimBlock& sim = need_simulation(ctx);
  if (!ctx.cfg.scan) fail(Err::config_error, "mdp-scan needs a scan block");
  const ScanBlock& scan = *ctx.cfg.scan;

  auto provider = make_provider(ctx, env, sim);
  const auto coeffs = coefficients_for(env);
  const Estimator est = scan.estimator == "tilted" ? Estimator::tilted : Estimator::crude;
  const ScanResult result = mdp_scan(*provider, coeffs, make_scan_config(ctx, sim, scan), est);

  std::vector<std::string> rows;
  for (const auto& row : result.rows) rows.push_back(scan_row_csv(row));
  write_csv(ctx, "mdp_scan.csv",
            "epsilon,kappa,eta,estimator,n,p_hat,stderr,neg_rate,predicted_rate,regime_flag",
            rows);
}

void run_negligibility_scan(const Context& ctx) {
  const EnvBlock& env = need_environment(ctx);
  const SimBlock& sim = need_simulation(ctx);
  if (!ctx.cfg.scan) fail(Err::config_error, "negligibility-scan needs a scan block");
  const ScanBlock& scan = *ctx.cfg.scan;
  if (scan.estimator == "tilted")
    fail(Err::config_error, "negligibility-scan supports the crude estimator only");

  auto provider = make_provider(ctx, env, sim);
  const auto coeffs = coefficients_for(env);
  const Negligibility which =
      scan.which == "diffusion" ? Negligibility::diffusion : Negligibility::drift;
  const ScanResult result =
      negligibility_scan(*provider, coeffs, make_scan_config(ctx, sim, scan), which);

  std::vector<std::string> rows;
  for (const auto& row : result.rows) rows.push_back(scan_row_csv(row));
  write_csv(ctx, "negligibility_scan.csv",
            "epsilon,kappa,eta,estimator,n,p_hat,stderr,neg_rate,predicted_rate,regime_flag",
            rows);
}

std::uint64_t env_u64(const char* name, bool& present) {
  present = false;
  const char* raw = std::getenv(name);
  if (!raw || !*raw) return 0;
  char* end = nullptr;
  const unsigned long long v = std::strtoull(raw, &end, 10);
  if (end == raw || *end != '\0')
    fail(Err::config_error, std::string(name) + " must be a nonnegative integer");
  present = true;
  return v;
}

}  // namespace

int exit_code_for(Err code) { return code == Err::stat_check_failed ? 3 : 2; }

void run_experiment(const RunOptions& options) {
  Context ctx;
  ctx.cfg = load_config(options.config_path);
  ctx.subcommand = options.subcommand;

  bool has_env_seed = false, has_env_threads = false;
  const std::uint64_t env_seed = env_u64("MDPSIM_SEED", has_env_seed);
  const std::uint64_t env_threads = env_u64("MDPSIM_THREADS", has_env_threads);

  ctx.seed = options.has_seed_override ? options.seed_override
                                       : (has_env_seed ? env_seed : ctx.cfg.seed);
  ctx.threads = options.threads_override
                    ? options.threads_override
                    : (has_env_threads ? static_cast<unsigned>(env_threads) : default_threads());

  ctx.out_dir = options.out_dir.empty() ? ctx.cfg.output.dir : options.out_dir;
  std::error_code ec;
  std::filesystem::create_directories(ctx.out_dir, ec);
  if (ec) fail(Err::io_error, "cannot create output directory " + ctx.out_dir.string());

  if (options.subcommand == "homogenize")
    run_homogenize(ctx);
  else if (options.subcommand == "simulate")
    run_simulate(ctx);
  else if (options.subcommand == "verify-decomposition")
    run_verify_decomposition(ctx);
  else if (options.subcommand == "tail-bounds")
    run_tail_bounds(ctx);
  else if (options.subcommand == "mdp-scan")
    run_mdp_scan(ctx);
  else if (options.subcommand == "negligibility-scan")
    run_negligibility_scan(ctx);
  else
    fail(Err::config_error, "unknown subcommand: " + options.subcommand);
}

}  // namespace mdpsim
