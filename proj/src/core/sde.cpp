#include "core/sde.hpp"

#include <cmath>

#include "core/errors.hpp"

namespace mdpsim {

namespace {
constexpr double kResolutionFraction = 0.15;  // max step displacement / cell width
}

void validate(const SimulationParams& p) {
  if (!(p.epsilon > 0.0)) fail(Err::invalid_argument, "epsilon must be positive");
  if (!(p.kappa > 0.0)) fail(Err::invalid_argument, "kappa must be positive");
  if (!(p.T > 0.0)) fail(Err::invalid_argument, "T must be positive");
  if (!std::isfinite(p.x0)) fail(Err::invalid_argument, "x0 must be finite");
}

double resolve_dt(const SimulationParams& p, const Environment& env) {
  validate(p);
  if (p.dt > 0.0) return p.dt;
  double dt = 1e-4 * p.T;
  const double cell = p.epsilon * env.feature_length();
  if (std::isfinite(cell)) {
    const double noise_amp = std::pow(p.epsilon, p.kappa) * std::sqrt(env.max_sigma_sq());
    const double dt_noise = std::pow(kResolutionFraction * cell / noise_amp, 2);
    dt = std::min(dt, dt_noise);
    if (env.max_abs_b() > 0.0)
      dt = std::min(dt, kResolutionFraction * cell / env.max_abs_b());
  }
  return dt;
}

namespace {

struct Grid {
  std::size_t n;
  double dt;
  double time(std::size_t i, double T) const {
    return static_cast<double>(i) * T / static_cast<double>(n);
  }
};

Grid make_grid(const SimulationParams& p, const Environment& env) {
  const double dt = resolve_dt(p, env);
  std::size_t n = static_cast<std::size_t>(std::llround(p.T / dt));
  if (n == 0) n = 1;
  return {n, p.T / static_cast<double>(n)};
}

}  // namespace

DiffusionPath simulate_euler(const SimulationParams& p, Environment& env, Rng& rng,
                             bool with_drift, double extra_drift) {
  const Grid g = make_grid(p, env);
  const double noise_scale = std::pow(p.epsilon, p.kappa);
  const double sqrt_dt = std::sqrt(g.dt);

  DiffusionPath path;
  path.scheme = with_drift ? Scheme::euler_drift : Scheme::euler_driftless;
  path.epsilon = p.epsilon;
  path.kappa = p.kappa;
  path.x0 = p.x0;
  path.times.resize(g.n + 1);
  path.values.resize(g.n + 1);
  path.times[0] = 0.0;
  path.values[0] = p.x0;

  double x = p.x0;
  for (std::size_t i = 0; i < g.n; ++i) {
    const EnvState e = env.at(x / p.epsilon);
    const double drift = (with_drift ? e.b : 0.0) + extra_drift;
    x += drift * g.dt + noise_scale * e.sigma * sqrt_dt * rng.normal();
    path.times[i + 1] = g.time(i + 1, p.T);
    path.values[i + 1] = x;
  }
  return path;
}

double resolve_h_beta(const SimulationParams& p, const Environment& env, double dt) {
  return 0.1 * dt * std::pow(p.epsilon, 2.0 * p.kappa) * env.min_sigma_sq();
}

DiffusionPath simulate_timechange(const SimulationParams& p, Environment& env, Rng& rng) {
  const Grid g = make_grid(p, env);
  const double h = resolve_h_beta(p, env, g.dt);
  const double sqrt_h = std::sqrt(h);
  const double rate_scale = std::pow(p.epsilon, 2.0 * p.kappa);

  DiffusionPath path;
  path.scheme = Scheme::timechange;
  path.epsilon = p.epsilon;
  path.kappa = p.kappa;
  path.x0 = p.x0;
  path.times.resize(g.n + 1);
  path.values.resize(g.n + 1);
  path.times[0] = 0.0;
  path.values[0] = p.x0;

  double clock = 0.0;
  double beta = 0.0;
  std::size_t i = 1;
  while (i <= g.n) {
    const EnvState e = env.at((beta + p.x0) / p.epsilon);
    const double dclock = h / (rate_scale * e.sigma * e.sigma);
    const double beta_next = beta + sqrt_h * rng.normal();
    // the step rule keeps dclock <= dt/10, so several beta-steps make up one
    // output step and at most one grid time can fall inside this one
    while (i <= g.n && clock + dclock >= g.time(i, p.T)) {
      const double frac = (g.time(i, p.T) - clock) / dclock;
      path.times[i] = g.time(i, p.T);
      path.values[i] = p.x0 + beta + frac * (beta_next - beta);
      ++i;
    }
    clock += dclock;
    beta = beta_next;
  }
  return path;
}

double girsanov_log_weight(const DiffusionPath& path, const SimulationParams& p,
                           Environment& env) {
  if (path.scheme == Scheme::euler_drift)
    fail(Err::invalid_weight_request, "girsanov weight requires a driftless path");
  if (path.values.empty() || path.values.front() != p.x0 || path.epsilon != p.epsilon ||
      path.kappa != p.kappa)
    fail(Err::invalid_weight_request, "girsanov weight: path and params do not match");

  const double noise_scale = std::pow(p.epsilon, p.kappa);
  double logw = 0.0;
  for (std::size_t i = 0; i + 1 < path.values.size(); ++i) {
    const EnvState e = env.at(path.values[i] / p.epsilon);
    const double dt = path.times[i + 1] - path.times[i];
    const double db = (path.values[i + 1] - path.values[i]) / (noise_scale * e.sigma);
    const double phi = e.b / (noise_scale * e.sigma);
    logw += phi * db - 0.5 * phi * phi * dt;
  }
  return logw;
}

PathFunctionals euler_functionals(const SimulationParams& p, Environment& env, Rng& rng,
                                  const HomogenizedCoefficients& coeffs, double eta,
                                  bool with_drift, double tilt) {
  const Grid g = make_grid(p, env);
  const double noise_scale = std::pow(p.epsilon, p.kappa);
  const double sqrt_dt = std::sqrt(g.dt);

  PathFunctionals out;
  double x = p.x0;
  double int_drift = 0.0, int_diff = 0.0;
  for (std::size_t i = 0; i < g.n; ++i) {
    const EnvState e = env.at(x / p.epsilon);
    const double xi = rng.normal();
    const double drift = (with_drift ? e.b : 0.0) + tilt;
    x += drift * g.dt + noise_scale * e.sigma * sqrt_dt * xi;

    if (tilt != 0.0) {
      const double phi = tilt / (noise_scale * e.sigma);
      out.log_weight -= phi * sqrt_dt * xi + 0.5 * phi * phi * g.dt;
    }

    int_drift += (e.b - coeffs.b_eff) * g.dt;
    int_diff += (e.sigma * e.sigma - coeffs.a_eff) * g.dt;
    out.sup_int_drift = std::max(out.sup_int_drift, std::abs(int_drift));
    out.sup_int_diff = std::max(out.sup_int_diff, std::abs(int_diff));

    const double dev = x - p.x0 - coeffs.b_eff * g.time(i + 1, p.T);
    const double abs_dev = std::abs(dev);
    out.sup_dev = std::max(out.sup_dev, abs_dev);
    if (out.first_exit_side == 0 && abs_dev > eta) out.first_exit_side = dev > 0.0 ? 1 : -1;
  }
  out.x_terminal = x;
  return out;
}

}  // namespace mdpsim
