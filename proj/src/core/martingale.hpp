#pragma once

#include <cstdint>
#include <vector>

#include "core/chain.hpp"
#include "core/chain_algebra.hpp"

namespace mdpsim {

// One realization of the additive-functional decomposition
//   int_0^t f(sigma(s)) ds = V_t - V_0 - M_t
// along an environment path, on the exact grid of environment jump times.
// The integral and the quadratic variation accrue in closed form per segment;
// V jumps exactly at environment jumps; M is defined by the identity.
struct DecompositionSample {
  std::vector<double> times;     // 0, the jump times below the horizon, horizon
  std::vector<int> states;       // state on [times[k], times[k+1])
  std::vector<double> integral;  // running integral at times[k]
  std::vector<double> v;         // V (right-continuous value) at times[k]
  std::vector<double> m;         // M at times[k]
  std::vector<double> qv;        // <M> at times[k]
};

DecompositionSample sample_decomposition(const ChainSpec& spec, const std::vector<double>& pi,
                                         const CenteredObservable& f,
                                         const PoissonDecomposition& dec, double horizon,
                                         std::uint64_t seed);

// min(1, 2 exp(-r^2 / (2q))): continuous-martingale tail bound
double bound_continuous(double r, double q);

// min(1, 2 exp(-r^2 / (2 (K r + q)))): bounded-jump martingale tail bound;
// equals bound_continuous at K = 0
double bound_jump(double r, double q, double K);

struct TailCell {
  double r = 0, q = 0, jump_bound = 0;
  long n = 0;
  double freq = 0;    // empirical P(sup |M| >= r, <M>_U <= q)
  double ucl99 = 0;   // one-sided 99% upper confidence limit for the frequency
  double lcl99 = 0;   // one-sided 99% lower confidence limit
  double bound = 0;   // bound_jump(r, q, K)
  bool violated = false;  // lcl99 > bound
};

TailCell empirical_tail(const ChainSpec& spec, const std::vector<double>& pi,
                        const CenteredObservable& f, const PoissonDecomposition& dec,
                        double horizon, double r, double q, long n_replicas,
                        std::uint64_t master_seed, unsigned threads);

// Per-path summary statistics; one batch of walks serves a whole (r, q) grid.
struct TailPathStats {
  double sup_abs_m = 0.0;
  double qv_horizon = 0.0;
};

std::vector<TailPathStats> tail_walk_batch(const ChainSpec& spec, const std::vector<double>& pi,
                                           const CenteredObservable& f,
                                           const PoissonDecomposition& dec, double horizon,
                                           long n_replicas, std::uint64_t master_seed,
                                           unsigned threads);

TailCell evaluate_tail_cell(const std::vector<TailPathStats>& batch, double r, double q,
                            double jump_bound);

// Cross-checks the decomposition along one path by accumulating M twice: once
// from the identity and once from V's jumps minus the generator compensator.
// Any disagreement beyond roundoff means the solve does not hold path-wise.
struct DecompositionCheck {
  double identity_residual = 0.0;  // max over grid, relative to max(1, sup|M|)
  double max_jump = 0.0;           // largest |Delta M| seen
  double m_horizon = 0.0;
  double qv_horizon = 0.0;
};

DecompositionCheck verify_decomposition_walk(const ChainSpec& spec,
                                             const std::vector<double>& pi,
                                             const CenteredObservable& f,
                                             const PoissonDecomposition& dec, double horizon,
                                             std::uint64_t seed);

}  // namespace mdpsim
