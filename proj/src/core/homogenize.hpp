#pragma once

#include <string>
#include <vector>

#include "core/chain.hpp"
#include "core/environment.hpp"

namespace mdpsim {

// Effective drift and diffusion of the coarse-grained model.  Both are
// harmonic-type averages: weights 1/sigma^2 reflect that the process lingers
// where the noise is small.
struct HomogenizedCoefficients {
  double b_eff = 0.0;
  double a_eff = 0.0;
  double quad_error = 0.0;  // quadrature error estimate (periodic case only)
  enum class Kind { chain, periodic } kind = Kind::chain;
};

// b = sum_i g(a_i) pi_i / a_i^2 / sum_i pi_i / a_i^2,  a = 1 / sum_i pi_i / a_i^2
HomogenizedCoefficients homogenize_chain(const ChainSpec& spec);
HomogenizedCoefficients homogenize_chain(const ChainSpec& spec, const std::vector<double>& pi);

// Midpoint-rule quadrature of b = (int b/s^2) / (int 1/s^2), a = 1 / int 1/s^2
// over one period at the tabulated resolution, with a half-resolution
// difference as the error estimate.
HomogenizedCoefficients homogenize_periodic(const PeriodicEnv& env);

}  // namespace mdpsim
