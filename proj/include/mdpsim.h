/* mdpsim: simulation and numerical verification of scalar diffusions in
 * random (finite-state Markov chain) and periodic environments.
 *
 * C API over the core library: opaque handles plus status codes.  All
 * functions returning mdpsim_status leave outputs untouched on failure; a
 * thread-local message describing the last failure is available through
 * mdpsim_last_error().
 */
#ifndef MDPSIM_H
#define MDPSIM_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum mdpsim_status {
  MDPSIM_OK = 0,
  MDPSIM_ERR_INVALID_ARGUMENT,
  MDPSIM_ERR_INVALID_GENERATOR,
  MDPSIM_ERR_NOT_ERGODIC,
  MDPSIM_ERR_INVALID_ENVIRONMENT,
  MDPSIM_ERR_SOLVE_FAILED,
  MDPSIM_ERR_INVALID_QUERY,
  MDPSIM_ERR_INVALID_PATH,
  MDPSIM_ERR_INVALID_WEIGHT_REQUEST,
  MDPSIM_ERR_CONFIG,
  MDPSIM_ERR_IO,
  MDPSIM_ERR_STAT_CHECK,
  MDPSIM_ERR_INTERNAL
} mdpsim_status;

const char* mdpsim_version(void);

/* Message for the most recent error on this thread; empty string if none. */
const char* mdpsim_last_error(void);

/* Exit-status convention used by the CLI: 0 ok, 2 validation error,
 * 3 statistical check failure. */
int mdpsim_status_exit_code(mdpsim_status status);

/* ---- environment chain ------------------------------------------------- */

/* Validated finite-state chain: alphabet values, m x m intensity matrix
 * (row-major), observable g per state. */
typedef struct mdpsim_chain mdpsim_chain;

mdpsim_status mdpsim_chain_create(const double* states, const double* generator,
                                  const double* observable, size_t m, mdpsim_chain** out);
void mdpsim_chain_destroy(mdpsim_chain* chain);

/* Invariant distribution pi (length m). */
mdpsim_status mdpsim_chain_stationary(const mdpsim_chain* chain, double* pi_out);

/* Homogenized drift and diffusion. */
mdpsim_status mdpsim_chain_homogenize(const mdpsim_chain* chain, double* b_eff, double* a_eff);

/* Solves the generator equation Lambda h = f for a centered observable f
 * (length m, f . pi = 0): writes h (length m), the jump bound K and the
 * quadratic-variation density m_i (length m).  Any output pointer may be
 * NULL. */
mdpsim_status mdpsim_chain_poisson(const mdpsim_chain* chain, const double* f, double* h_out,
                                   double* jump_bound_out, double* qv_out);

/* ---- environment realizations ------------------------------------------ */

/* One lazily extended two-sided realization of the chain as a function of the
 * spatial coordinate. */
typedef struct mdpsim_env_path mdpsim_env_path;

mdpsim_status mdpsim_env_realize(const mdpsim_chain* chain, uint64_t seed,
                                 mdpsim_env_path** out);
void mdpsim_env_path_destroy(mdpsim_env_path* path);

/* State index, sigma value and drift value at coordinate u (right-continuous;
 * extends the realization as needed).  Output pointers may be NULL. */
mdpsim_status mdpsim_env_eval(mdpsim_env_path* path, double u, int* state, double* sigma,
                              double* b);

/* ---- martingale tail bounds ---------------------------------------------- */

/* min(1, 2 exp(-r^2 / (2q))) and min(1, 2 exp(-r^2 / (2 (K r + q)))). */
mdpsim_status mdpsim_bound_continuous(double r, double q, double* out);
mdpsim_status mdpsim_bound_jump(double r, double q, double K, double* out);

/* ---- deviation rate ------------------------------------------------------- */

/* Action of a continuous piecewise-linear path u over breakpoints t
 * (t[0] = 0, u[0] = x0):  1/(2 a_eff) * int (u' - b_eff)^2 dt. */
mdpsim_status mdpsim_rate_j(const double* t, const double* u, size_t n_points, double x0,
                            double b_eff, double a_eff, double* out);

/* eta^2 / (2 a_eff T): cheapest action leaving the eta-tube by time T. */
mdpsim_status mdpsim_tube_exit_rate(double eta, double T, double a_eff, double* out);

/* ---- experiment runner ---------------------------------------------------- */

/* Runs one subcommand against a JSON experiment config, writing CSV results
 * into out_dir (NULL: the config's output.dir).  seed_override < 0 and
 * threads_override <= 0 mean "not set".  Subcommands: homogenize, simulate,
 * verify-decomposition, tail-bounds, mdp-scan, negligibility-scan. */
mdpsim_status mdpsim_run(const char* subcommand, const char* config_path, const char* out_dir,
                         long long seed_override, int threads_override);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* MDPSIM_H */
