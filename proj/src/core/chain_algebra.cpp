#include "core/chain_algebra.hpp"

#include <cmath>

#include "core/errors.hpp"
#include "core/homogenize.hpp"

namespace mdpsim {

CenteredObservable center(const ChainSpec& spec, const std::vector<double>& pi,
                          const std::vector<double>& psi, const std::vector<double>& weights) {
  const std::size_t m = spec.size();
  if (psi.size() != m || weights.size() != m)
    fail(Err::invalid_argument, "center: psi/weights must have one value per state");
  const double pw = dot(pi, weights);
  if (pw == 0.0) fail(Err::invalid_argument, "center: weights have zero mean under pi");
  const double c = dot(pi, psi) / pw;
  CenteredObservable out;
  out.centering = c;
  out.f.resize(m);
  for (std::size_t i = 0; i < m; ++i) out.f[i] = psi[i] - c * weights[i];
  return out;
}

CenteredObservable center(const ChainSpec& spec, const std::vector<double>& pi,
                          const std::vector<double>& psi) {
  return center(spec, pi, psi, std::vector<double>(spec.size(), 1.0));
}

CenteredObservable drift_theta(const ChainSpec& spec, const std::vector<double>& pi) {
  const std::size_t m = spec.size();
  std::vector<double> psi(m), w(m);
  for (std::size_t i = 0; i < m; ++i) {
    const double a2 = spec.states[i] * spec.states[i];
    psi[i] = spec.observable[i] / a2;
    w[i] = 1.0 / a2;
  }
  return center(spec, pi, psi, w);  // centering constant is b_eff
}

CenteredObservable diffusion_theta(const ChainSpec& spec, const std::vector<double>& pi) {
  const std::size_t m = spec.size();
  std::vector<double> psi(m, 1.0), w(m);
  for (std::size_t i = 0; i < m; ++i) w[i] = 1.0 / (spec.states[i] * spec.states[i]);
  return center(spec, pi, psi, w);  // centering constant is a_eff
}

std::vector<double> qv_density(const ChainSpec& spec, const std::vector<double>& h) {
  const std::size_t m = spec.size();
  std::vector<double> out(m, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    // h . ( diag(L^T e_i) - [e_i e_i^T L + L^T e_i e_i^T] ) . h with
    // (L^T e_i)_j = L_ij; algebraically equal to sum_j L_ij (h_j - h_i)^2
    double s = 0.0;
    for (std::size_t j = 0; j < m; ++j) s += spec.generator(i, j) * h[j] * h[j];
    double lrow_h = 0.0;  // (L h)_i
    for (std::size_t j = 0; j < m; ++j) lrow_h += spec.generator(i, j) * h[j];
    s -= 2.0 * h[i] * lrow_h;
    out[i] = s;
  }
  return out;
}

PoissonDecomposition solve_poisson(const ChainSpec& spec, const std::vector<double>& pi,
                                   const CenteredObservable& f) {
  const std::size_t m = spec.size();
  if (f.f.size() != m) fail(Err::invalid_argument, "solve_poisson: dimension mismatch");
  if (std::abs(dot(pi, f.f)) > 1e-10)
    fail(Err::invalid_argument, "solve_poisson: observable is not centered");

  // augmented system [Lambda; pi^T] h = [f; 0] pins the h . pi = 0 class
  Matrix a(m + 1, m);
  std::vector<double> rhs(m + 1, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) a(i, j) = spec.generator(i, j);
    rhs[i] = f.f[i];
  }
  for (std::size_t j = 0; j < m; ++j) a(m, j) = pi[j];

  PoissonDecomposition out;
  out.h = solve_least_squares(a, rhs);

  double resid = 0.0;
  const auto lh = matvec(spec.generator, out.h);
  for (std::size_t i = 0; i < m; ++i) resid = std::max(resid, std::abs(lh[i] - f.f[i]));
  resid = std::max(resid, std::abs(dot(pi, out.h)));
  if (resid > 1e-10) fail(Err::solve_failed, "solve_poisson: residual too large");

  out.jump_bound = 0.0;
  out.v_bound = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    out.v_bound = std::max(out.v_bound, std::abs(out.h[i]));
    for (std::size_t j = 0; j < m; ++j)
      out.jump_bound = std::max(out.jump_bound, std::abs(out.h[j] - out.h[i]));
  }
  out.qv = qv_density(spec, out.h);
  return out;
}

}  // namespace mdpsim
