#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "core/environment.hpp"
#include "core/homogenize.hpp"
#include "core/sde.hpp"

namespace mdpsim {

// Continuous piecewise-linear path on [0, T]; construction enforces the
// admissibility conditions, so the action evaluation below is always finite.
class RatePath {
 public:
  RatePath(std::vector<double> breakpoints, std::vector<double> values, double x0);

  const std::vector<double>& t() const { return t_; }
  const std::vector<double>& u() const { return u_; }
  double x0() const { return x0_; }
  double horizon() const { return t_.back(); }

 private:
  std::vector<double> t_, u_;
  double x0_;
};

// J(u) = 1/(2a) * int_0^T (u'(t) - b)^2 dt, evaluated segment-exactly.
double rate_J(const RatePath& path, const HomogenizedCoefficients& coeffs);

// Cheapest action among paths leaving the eta-tube around x0 + b t by time T:
// a straight ramp to the boundary over the whole horizon, eta^2 / (2 a T).
double tube_exit_rate(double eta, double T, const HomogenizedCoefficients& coeffs);

enum class Estimator { crude, tilted };
enum class Negligibility { drift, diffusion };

struct ScanRow {
  double epsilon = 0, kappa = 0, eta = 0;
  std::string estimator;
  long n = 0;
  double p_hat = 0, stderr_p = 0;
  double neg_rate = 0;        // -eps^{2 kappa} log p_hat (NaN when unusable)
  double predicted_rate = 0;  // eta^2/(2aT) for tube scans, NaN otherwise
  std::string regime_flag;
  bool usable = true;
};

struct ScanResult {
  std::vector<ScanRow> rows;  // sorted by epsilon descending
};

struct ScanConfig {
  std::vector<double> epsilons;
  double kappa = 0, x0 = 0, T = 0;
  double dt = 0;  // <= 0: automatic per-epsilon step rule
  double eta = 0;
  long replicas = 0;
  std::uint64_t seed = 0;
  unsigned threads = 0;
};

std::string regime_flag(double kappa, HomogenizedCoefficients::Kind kind);

// P(sup_{t<=T} |X - x0 - b t| > eta) per epsilon.  The tilted estimator runs
// half the replicas with tilt +eta/T scoring upper first exits and half with
// -eta/T scoring lower first exits, each reweighted by the exact discrete
// likelihood ratio; a reference crude row is appended for the largest epsilon.
ScanResult mdp_scan(EnvProvider& provider, const HomogenizedCoefficients& coeffs,
                    const ScanConfig& cfg, Estimator estimator);

// P(sup_{t<=T} |int_0^t (b(X/eps) - b_eff) ds| > eta) or the same with
// sigma^2 - a_eff; crude estimation only.
ScanResult negligibility_scan(EnvProvider& provider, const HomogenizedCoefficients& coeffs,
                              const ScanConfig& cfg, Negligibility which);

}  // namespace mdpsim
