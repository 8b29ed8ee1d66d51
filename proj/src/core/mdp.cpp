#include "core/mdp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "core/errors.hpp"
#include "core/parallel.hpp"
#include "core/stats.hpp"

namespace mdpsim {

RatePath::RatePath(std::vector<double> breakpoints, std::vector<double> values, double x0)
    : t_(std::move(breakpoints)), u_(std::move(values)), x0_(x0) {
  if (t_.size() < 2 || t_.size() != u_.size())
    fail(Err::invalid_path, "rate path needs matching breakpoint/value lists, length >= 2");
  if (t_.front() != 0.0) fail(Err::invalid_path, "rate path must start at t = 0");
  for (std::size_t i = 0; i + 1 < t_.size(); ++i)
    if (!(t_[i] < t_[i + 1])) fail(Err::invalid_path, "breakpoints must be strictly increasing");
  for (double v : u_)
    if (!std::isfinite(v)) fail(Err::invalid_path, "rate path values must be finite");
  if (u_.front() != x0_) fail(Err::invalid_path, "rate path must start at x0");
}

double rate_J(const RatePath& path, const HomogenizedCoefficients& coeffs) {
  double j = 0.0;
  const auto& t = path.t();
  const auto& u = path.u();
  for (std::size_t i = 0; i + 1 < t.size(); ++i) {
    const double dt = t[i + 1] - t[i];
    const double slope = (u[i + 1] - u[i]) / dt;
    const double d = slope - coeffs.b_eff;
    j += d * d * dt;
  }
  return j / (2.0 * coeffs.a_eff);
}

double tube_exit_rate(double eta, double T, const HomogenizedCoefficients& coeffs) {
  if (!(eta > 0.0) || !(T > 0.0)) fail(Err::invalid_query, "tube_exit_rate requires eta, T > 0");
  return eta * eta / (2.0 * coeffs.a_eff * T);
}

std::string regime_flag(double kappa, HomogenizedCoefficients::Kind kind) {
  if (kind == HomogenizedCoefficients::Kind::chain && kappa < 1.0 / 6.0) return "kappa_lt_1_6";
  if (kappa < 0.5) return "kappa_lt_1_2";
  return "kappa_ge_1_2";
}

namespace {

double neg_log_rate(double eps, double kappa, double p) {
  if (!(p > 0.0)) return std::numeric_limits<double>::quiet_NaN();
  return -std::pow(eps, 2.0 * kappa) * std::log(p);
}

SimulationParams params_for(const ScanConfig& cfg, double eps) {
  SimulationParams p;
  p.epsilon = eps;
  p.kappa = cfg.kappa;
  p.x0 = cfg.x0;
  p.T = cfg.T;
  p.dt = cfg.dt;
  p.seed = cfg.seed;
  return p;
}

// lane indices keep every replica's streams disjoint across (epsilon, replica,
// purpose) regardless of scheduling
constexpr std::uint64_t kLaneEnv = 0, kLaneNoise = 1;

struct CrudeOut {
  long hits = 0;
};

ScanRow crude_row(EnvProvider& provider, const HomogenizedCoefficients& coeffs,
                  const ScanConfig& cfg, double eps, std::size_t eps_index, double predicted,
                  bool tube_event, Negligibility which) {
  const SimulationParams p = params_for(cfg, eps);
  const long n = cfg.replicas;
  std::vector<unsigned char> hit(static_cast<std::size_t>(n), 0);
  parallel_for(static_cast<std::size_t>(n), cfg.threads, [&](std::size_t i) {
    auto env = provider.acquire(derive_stream(cfg.seed, eps_index, i, kLaneEnv));
    Rng rng(derive_stream(cfg.seed, eps_index, i, kLaneNoise));
    const PathFunctionals f =
        euler_functionals(p, *env, rng, coeffs, cfg.eta, /*with_drift=*/true, /*tilt=*/0.0);
    double stat;
    if (tube_event)
      stat = f.sup_dev;
    else
      stat = which == Negligibility::drift ? f.sup_int_drift : f.sup_int_diff;
    hit[i] = stat > cfg.eta ? 1 : 0;
  });
  long k = 0;
  for (unsigned char h : hit) k += h;

  ScanRow row;
  row.epsilon = eps;
  row.kappa = cfg.kappa;
  row.eta = cfg.eta;
  row.estimator = "crude";
  row.n = n;
  row.p_hat = static_cast<double>(k) / static_cast<double>(n);
  row.stderr_p = std::sqrt(row.p_hat * (1.0 - row.p_hat) / static_cast<double>(n));
  row.neg_rate = neg_log_rate(eps, cfg.kappa, row.p_hat);
  row.usable = k > 0;
  row.predicted_rate = predicted;
  return row;
}

ScanRow tilted_row(EnvProvider& provider, const HomogenizedCoefficients& coeffs,
                   const ScanConfig& cfg, double eps, std::size_t eps_index, double predicted) {
  const SimulationParams p = params_for(cfg, eps);
  const double tilt = cfg.eta / cfg.T;
  const long n_side = cfg.replicas / 2;

  // slot per replica: weighted indicator of the matching first-exit side
  std::vector<double> up(static_cast<std::size_t>(n_side), 0.0);
  std::vector<double> down(static_cast<std::size_t>(n_side), 0.0);
  parallel_for(static_cast<std::size_t>(2 * n_side), cfg.threads, [&](std::size_t i) {
    const bool upper = i < static_cast<std::size_t>(n_side);
    auto env = provider.acquire(derive_stream(cfg.seed, eps_index, i, kLaneEnv));
    Rng rng(derive_stream(cfg.seed, eps_index, i, kLaneNoise));
    const PathFunctionals f = euler_functionals(p, *env, rng, coeffs, cfg.eta,
                                                /*with_drift=*/true, upper ? tilt : -tilt);
    const int want = upper ? 1 : -1;
    const double val = f.first_exit_side == want ? std::exp(f.log_weight) : 0.0;
    if (upper)
      up[i] = val;
    else
      down[i - static_cast<std::size_t>(n_side)] = val;
  });

  Accumulator acc_up, acc_down;
  for (double w : up) acc_up.add(w);
  for (double w : down) acc_down.add(w);

  ScanRow row;
  row.epsilon = eps;
  row.kappa = cfg.kappa;
  row.eta = cfg.eta;
  row.estimator = "tilted";
  row.n = 2 * n_side;
  row.p_hat = acc_up.mean() + acc_down.mean();
  row.stderr_p = std::sqrt(acc_up.stderr_mean() * acc_up.stderr_mean() +
                           acc_down.stderr_mean() * acc_down.stderr_mean());
  row.neg_rate = neg_log_rate(eps, cfg.kappa, row.p_hat);
  row.usable = row.p_hat > 0.0;
  row.predicted_rate = predicted;
  return row;
}

void check_scan_config(const ScanConfig& cfg) {
  if (cfg.epsilons.empty()) fail(Err::invalid_query, "scan needs at least one epsilon");
  for (double e : cfg.epsilons)
    if (!(e > 0.0)) fail(Err::invalid_query, "scan epsilons must be positive");
  if (!(cfg.eta > 0.0)) fail(Err::invalid_query, "scan eta must be positive");
  if (!(cfg.T > 0.0)) fail(Err::invalid_query, "scan T must be positive");
  if (!(cfg.kappa > 0.0)) fail(Err::invalid_query, "scan kappa must be positive");
  if (cfg.replicas < 2) fail(Err::invalid_query, "scan needs at least 2 replicas");
}

}  // namespace

ScanResult mdp_scan(EnvProvider& provider, const HomogenizedCoefficients& coeffs,
                    const ScanConfig& cfg, Estimator estimator) {
  check_scan_config(cfg);
  std::vector<double> eps = cfg.epsilons;
  std::sort(eps.begin(), eps.end(), std::greater<double>());
  const double predicted = tube_exit_rate(cfg.eta, cfg.T, coeffs);
  const std::string flag = regime_flag(cfg.kappa, coeffs.kind);

  ScanResult out;
  for (std::size_t k = 0; k < eps.size(); ++k) {
    ScanRow row = estimator == Estimator::crude
                      ? crude_row(provider, coeffs, cfg, eps[k], k, predicted, true,
                                  Negligibility::drift)
                      : tilted_row(provider, coeffs, cfg, eps[k], k, predicted);
    row.regime_flag = flag;
    out.rows.push_back(std::move(row));
    // consistency reference against the plain estimator where it is cheapest
    if (estimator == Estimator::tilted && k == 0) {
      ScanRow ref = crude_row(provider, coeffs, cfg, eps[k], eps.size(), predicted, true,
                              Negligibility::drift);
      ref.regime_flag = flag;
      out.rows.push_back(std::move(ref));
    }
  }
  return out;
}

ScanResult negligibility_scan(EnvProvider& provider, const HomogenizedCoefficients& coeffs,
                              const ScanConfig& cfg, Negligibility which) {
  check_scan_config(cfg);
  std::vector<double> eps = cfg.epsilons;
  std::sort(eps.begin(), eps.end(), std::greater<double>());
  const std::string flag = regime_flag(cfg.kappa, coeffs.kind);

  ScanResult out;
  for (std::size_t k = 0; k < eps.size(); ++k) {
    ScanRow row = crude_row(provider, coeffs, cfg, eps[k], k,
                            std::numeric_limits<double>::quiet_NaN(), false, which);
    row.regime_flag = flag;
    out.rows.push_back(std::move(row));
  }
  return out;
}

}  // namespace mdpsim
