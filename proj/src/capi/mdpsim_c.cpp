#include "mdpsim.h"

#include <cstring>
#include <memory>
#include <string>
#include <vector>

#include "core/chain.hpp"
#include "core/chain_algebra.hpp"
#include "core/environment.hpp"
#include "core/errors.hpp"
#include "core/homogenize.hpp"
#include "core/martingale.hpp"
#include "core/mdp.hpp"
#include "core/runner.hpp"

namespace {

thread_local std::string g_last_error;

mdpsim_status status_for(mdpsim::Err code) {
  using mdpsim::Err;
  switch (code) {
    case Err::invalid_argument: return MDPSIM_ERR_INVALID_ARGUMENT;
    case Err::invalid_generator: return MDPSIM_ERR_INVALID_GENERATOR;
    case Err::not_ergodic: return MDPSIM_ERR_NOT_ERGODIC;
    case Err::invalid_environment: return MDPSIM_ERR_INVALID_ENVIRONMENT;
    case Err::solve_failed: return MDPSIM_ERR_SOLVE_FAILED;
    case Err::invalid_query: return MDPSIM_ERR_INVALID_QUERY;
    case Err::invalid_path: return MDPSIM_ERR_INVALID_PATH;
    case Err::invalid_weight_request: return MDPSIM_ERR_INVALID_WEIGHT_REQUEST;
    case Err::config_error: return MDPSIM_ERR_CONFIG;
    case Err::io_error: return MDPSIM_ERR_IO;
    case Err::stat_check_failed: return MDPSIM_ERR_STAT_CHECK;
  }
  return MDPSIM_ERR_INTERNAL;
}

template <class Fn>
mdpsim_status guarded(Fn&& fn) {
  try {
    fn();
    g_last_error.clear();
    return MDPSIM_OK;
  } catch (const mdpsim::Error& e) {
    g_last_error = e.what();
    return status_for(e.code());
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return MDPSIM_ERR_INTERNAL;
  } catch (...) {
    g_last_error = "unknown error";
    return MDPSIM_ERR_INTERNAL;
  }
}

}  // namespace

struct mdpsim_chain {
  mdpsim::ChainSpec spec;
  std::vector<double> pi;
};

struct mdpsim_env_path {
  std::unique_ptr<mdpsim::EnvironmentPath> path;
};

extern "C" {

const char* mdpsim_version(void) { return mdpsim::kVersion; }

const char* mdpsim_last_error(void) { return g_last_error.c_str(); }

int mdpsim_status_exit_code(mdpsim_status status) {
  if (status == MDPSIM_OK) return 0;
  return status == MDPSIM_ERR_STAT_CHECK ? 3 : 2;
}

mdpsim_status mdpsim_chain_create(const double* states, const double* generator,
                                  const double* observable, size_t m, mdpsim_chain** out) {
  return guarded([&] {
    if (!states || !generator || !observable || !out)
      mdpsim::fail(mdpsim::Err::invalid_argument, "null pointer argument");
    mdpsim::ChainSpec spec;
    spec.states.assign(states, states + m);
    spec.observable.assign(observable, observable + m);
    spec.generator = mdpsim::Matrix(m, m);
    std::memcpy(spec.generator.a.data(), generator, m * m * sizeof(double));
    auto handle = std::make_unique<mdpsim_chain>();
    handle->pi = mdpsim::stationary_dist(spec);  // validates
    handle->spec = std::move(spec);
    *out = handle.release();
  });
}

void mdpsim_chain_destroy(mdpsim_chain* chain) { delete chain; }

mdpsim_status mdpsim_chain_stationary(const mdpsim_chain* chain, double* pi_out) {
  return guarded([&] {
    if (!chain || !pi_out) mdpsim::fail(mdpsim::Err::invalid_argument, "null pointer argument");
    std::memcpy(pi_out, chain->pi.data(), chain->pi.size() * sizeof(double));
  });
}

mdpsim_status mdpsim_chain_homogenize(const mdpsim_chain* chain, double* b_eff, double* a_eff) {
  return guarded([&] {
    if (!chain) mdpsim::fail(mdpsim::Err::invalid_argument, "null chain");
    const auto coeffs = mdpsim::homogenize_chain(chain->spec, chain->pi);
    if (b_eff) *b_eff = coeffs.b_eff;
    if (a_eff) *a_eff = coeffs.a_eff;
  });
}

mdpsim_status mdpsim_chain_poisson(const mdpsim_chain* chain, const double* f, double* h_out,
                                   double* jump_bound_out, double* qv_out) {
  return guarded([&] {
    if (!chain || !f) mdpsim::fail(mdpsim::Err::invalid_argument, "null pointer argument");
    mdpsim::CenteredObservable obs;
    obs.f.assign(f, f + chain->spec.size());
    obs.centering = 0.0;
    const auto dec = mdpsim::solve_poisson(chain->spec, chain->pi, obs);
    if (h_out) std::memcpy(h_out, dec.h.data(), dec.h.size() * sizeof(double));
    if (jump_bound_out) *jump_bound_out = dec.jump_bound;
    if (qv_out) std::memcpy(qv_out, dec.qv.data(), dec.qv.size() * sizeof(double));
  });
}

mdpsim_status mdpsim_env_realize(const mdpsim_chain* chain, uint64_t seed,
                                 mdpsim_env_path** out) {
  return guarded([&] {
    if (!chain || !out) mdpsim::fail(mdpsim::Err::invalid_argument, "null pointer argument");
    auto handle = std::make_unique<mdpsim_env_path>();
    handle->path = std::make_unique<mdpsim::EnvironmentPath>(chain->spec, chain->pi, seed);
    *out = handle.release();
  });
}

void mdpsim_env_path_destroy(mdpsim_env_path* path) { delete path; }

mdpsim_status mdpsim_env_eval(mdpsim_env_path* path, double u, int* state, double* sigma,
                              double* b) {
  return guarded([&] {
    if (!path) mdpsim::fail(mdpsim::Err::invalid_argument, "null path");
    const auto s = path->path->at(u);
    if (state) *state = s.state;
    if (sigma) *sigma = s.sigma;
    if (b) *b = s.b;
  });
}

mdpsim_status mdpsim_bound_continuous(double r, double q, double* out) {
  return guarded([&] {
    if (!out) mdpsim::fail(mdpsim::Err::invalid_argument, "null output");
    *out = mdpsim::bound_continuous(r, q);
  });
}

mdpsim_status mdpsim_bound_jump(double r, double q, double K, double* out) {
  return guarded([&] {
    if (!out) mdpsim::fail(mdpsim::Err::invalid_argument, "null output");
    *out = mdpsim::bound_jump(r, q, K);
  });
}

mdpsim_status mdpsim_rate_j(const double* t, const double* u, size_t n_points, double x0,
                            double b_eff, double a_eff, double* out) {
  return guarded([&] {
    if (!t || !u || !out) mdpsim::fail(mdpsim::Err::invalid_argument, "null pointer argument");
    mdpsim::RatePath path(std::vector<double>(t, t + n_points),
                          std::vector<double>(u, u + n_points), x0);
    mdpsim::HomogenizedCoefficients coeffs;
    coeffs.b_eff = b_eff;
    coeffs.a_eff = a_eff;
    *out = mdpsim::rate_J(path, coeffs);
  });
}

mdpsim_status mdpsim_tube_exit_rate(double eta, double T, double a_eff, double* out) {
  return guarded([&] {
    if (!out) mdpsim::fail(mdpsim::Err::invalid_argument, "null output");
    mdpsim::HomogenizedCoefficients coeffs;
    coeffs.a_eff = a_eff;
    *out = mdpsim::tube_exit_rate(eta, T, coeffs);
  });
}

mdpsim_status mdpsim_run(const char* subcommand, const char* config_path, const char* out_dir,
                         long long seed_override, int threads_override) {
  return guarded([&] {
    if (!subcommand || !config_path)
      mdpsim::fail(mdpsim::Err::invalid_argument, "subcommand and config path are required");
    mdpsim::RunOptions opts;
    opts.subcommand = subcommand;
    opts.config_path = config_path;
    if (out_dir) opts.out_dir = out_dir;
    if (seed_override >= 0) {
      opts.has_seed_override = true;
      opts.seed_override = static_cast<uint64_t>(seed_override);
    }
    if (threads_override > 0) opts.threads_override = static_cast<unsigned>(threads_override);
    mdpsim::run_experiment(opts);
  });
}

}  // extern "C"
