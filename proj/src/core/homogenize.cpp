#include "core/homogenize.hpp"

#include <cmath>

#include "core/errors.hpp"

namespace mdpsim {

HomogenizedCoefficients homogenize_chain(const ChainSpec& spec, const std::vector<double>& pi) {
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < spec.size(); ++i) {
    const double inv_a2 = pi[i] / (spec.states[i] * spec.states[i]);
    num += spec.observable[i] * inv_a2;
    den += inv_a2;
  }
  HomogenizedCoefficients out;
  out.kind = HomogenizedCoefficients::Kind::chain;
  out.b_eff = num / den;
  out.a_eff = 1.0 / den;
  return out;
}

HomogenizedCoefficients homogenize_chain(const ChainSpec& spec) {
  return homogenize_chain(spec, stationary_dist(spec));
}

namespace {

// midpoint sums of 1/s^2 and b/s^2 over the table, optionally using every
// second cell as the half-resolution pass
void quad_sums(const PeriodicEnv& env, std::size_t stride, double& inv_s2, double& b_inv_s2) {
  const auto& s = env.sigma_table();
  const auto& b = env.b_table();
  double si = 0.0, sb = 0.0;
  std::size_t count = 0;
  for (std::size_t k = stride / 2; k < s.size(); k += stride) {
    const double w = 1.0 / (s[k] * s[k]);
    si += w;
    sb += b[k] * w;
    ++count;
  }
  inv_s2 = si / static_cast<double>(count);
  b_inv_s2 = sb / static_cast<double>(count);
}

}  // namespace

HomogenizedCoefficients homogenize_periodic(const PeriodicEnv& env) {
  double inv_s2, b_inv_s2;
  quad_sums(env, 1, inv_s2, b_inv_s2);

  HomogenizedCoefficients out;
  out.kind = HomogenizedCoefficients::Kind::periodic;
  out.a_eff = 1.0 / inv_s2;
  out.b_eff = b_inv_s2 / inv_s2;

  if (env.resolution() >= 2) {
    double inv_h, b_inv_h;
    quad_sums(env, 2, inv_h, b_inv_h);
    const double a_h = 1.0 / inv_h;
    const double b_h = b_inv_h / inv_h;
    out.quad_error = std::max(std::abs(out.a_eff - a_h), std::abs(out.b_eff - b_h));
  }
  return out;
}

}  // namespace mdpsim
