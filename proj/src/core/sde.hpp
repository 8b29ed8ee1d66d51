#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "core/environment.hpp"
#include "core/homogenize.hpp"
#include "core/rng.hpp"

namespace mdpsim {

struct SimulationParams {
  double epsilon = 0.0;
  double kappa = 0.0;
  double x0 = 0.0;
  double T = 0.0;
  double dt = 0.0;  // <= 0 requests the automatic step rule
  std::uint64_t seed = 0;
};

void validate(const SimulationParams& p);

// Time step: never coarser than 1e-4 * T, and small enough that one step's
// displacement stays well inside one environment cell (cells have width
// epsilon * feature_length in x).  Featureless environments get the default.
double resolve_dt(const SimulationParams& p, const Environment& env);

enum class Scheme { euler_drift, euler_driftless, timechange };

struct DiffusionPath {
  std::vector<double> times;
  std::vector<double> values;
  Scheme scheme = Scheme::euler_drift;
  double epsilon = 0, kappa = 0, x0 = 0;
  std::optional<double> girsanov_log_weight;
};

// Left-endpoint Euler steps of
//   dX = b(X/eps) dt + eps^kappa sigma(X/eps) dB
// with the drift term optional and an additive tilt drift for importance
// sampling.
DiffusionPath simulate_euler(const SimulationParams& p, Environment& env, Rng& rng,
                             bool with_drift, double extra_drift = 0.0);

// Driftless weak solution built as a time-changed auxiliary Brownian motion:
// beta runs on a fine grid, the clock
//   C(r) = int_0^r ds / (eps^{2 kappa} sigma^2((beta_s + x0)/eps))
// accrues with left-endpoint evaluation, and C is inverted onto the uniform
// output grid by linear interpolation.  beta extends until the clock reaches T.
DiffusionPath simulate_timechange(const SimulationParams& p, Environment& env, Rng& rng);

// Auxiliary grid step for the time change: expected clock consumption per
// beta-step is at most dt/10 in every environment state.
double resolve_h_beta(const SimulationParams& p, const Environment& env, double dt);

// log of the likelihood ratio that converts the driftless path law into the
// with-drift law; increments of the driving noise are recovered from the
// stored path and the same environment realization.
double girsanov_log_weight(const DiffusionPath& path, const SimulationParams& p,
                           Environment& env);

// One-pass path statistics for the scan drivers: tube deviation from the
// homogenized line, the two centered sup-integrals, terminal value, and the
// tilt-compensating log weight.
struct PathFunctionals {
  double sup_dev = 0.0;
  int first_exit_side = 0;  // sign of the deviation when it first exceeds eta
  double sup_int_drift = 0.0;
  double sup_int_diff = 0.0;
  double x_terminal = 0.0;
  double log_weight = 0.0;
};

PathFunctionals euler_functionals(const SimulationParams& p, Environment& env, Rng& rng,
                                  const HomogenizedCoefficients& coeffs, double eta,
                                  bool with_drift, double tilt);

}  // namespace mdpsim
