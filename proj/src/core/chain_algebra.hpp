#pragma once

#include <vector>

#include "core/chain.hpp"

namespace mdpsim {

// Per-state observable with mean zero under the invariant distribution,
// f_i = psi_i - c * w_i where c is chosen so that f . pi = 0.
struct CenteredObservable {
  std::vector<double> f;
  double centering;  // the constant c
};

CenteredObservable center(const ChainSpec& spec, const std::vector<double>& pi,
                          const std::vector<double>& psi, const std::vector<double>& weights);

// weights == 1: plain mean removal
CenteredObservable center(const ChainSpec& spec, const std::vector<double>& pi,
                          const std::vector<double>& psi);

// The two canonical centered processes of the homogenization argument:
//   drift:     (g(a_i) - b_eff) / a_i^2, centering constant b_eff
//   diffusion: 1 - a_eff / a_i^2,        centering constant a_eff
CenteredObservable drift_theta(const ChainSpec& spec, const std::vector<double>& pi);
CenteredObservable diffusion_theta(const ChainSpec& spec, const std::vector<double>& pi);

// Solution bundle of the generator equation Lambda h = f in the class
// h . pi = 0, with the concrete constants the tail machinery needs.
struct PoissonDecomposition {
  std::vector<double> h;
  double jump_bound;        // K = max_{i,j} |h_j - h_i|
  std::vector<double> qv;   // m_i, quadratic-variation density per state
  double v_bound;           // max_i |h_i|
};

PoissonDecomposition solve_poisson(const ChainSpec& spec, const std::vector<double>& pi,
                                   const CenteredObservable& f);

// m_i = h . ( diag(L^T e_i) - [e_i e_i^T L + L^T e_i e_i^T] ) . h
std::vector<double> qv_density(const ChainSpec& spec, const std::vector<double>& h);

}  // namespace mdpsim
