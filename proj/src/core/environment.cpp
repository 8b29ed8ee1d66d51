#include "core/environment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <mutex>

#include "core/errors.hpp"

namespace mdpsim {

namespace {

std::vector<std::vector<double>> jump_cdfs(const Matrix& gen, const std::vector<double>& rates) {
  const std::size_t m = gen.rows;
  std::vector<std::vector<double>> cum(m, std::vector<double>(m, 0.0));
  for (std::size_t i = 0; i < m; ++i) {
    double acc = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
      if (j != i) acc += gen(i, j) / rates[i];
      cum[i][j] = acc;
    }
    cum[i][m - 1] = 1.0;
  }
  return cum;
}

}  // namespace

EnvironmentPath::EnvironmentPath(const ChainSpec& spec, const std::vector<double>& pi,
                                 std::uint64_t seed, std::uint64_t cell_budget,
                                 bool synchronized)
    : states_(spec.states),
      obs_(spec.observable),
      rng_fwd_(derive_stream(seed, 1)),
      rng_bwd_(derive_stream(seed, 2)),
      cell_budget_(cell_budget),
      synchronized_(synchronized) {
  const std::size_t m = spec.size();
  rates_.resize(m);
  for (std::size_t i = 0; i < m; ++i) rates_[i] = -spec.generator(i, i);

  cum_fwd_ = jump_cdfs(spec.generator, rates_);
  cum_bwd_ = jump_cdfs(reversed_generator(spec, pi), rates_);

  min_sig_sq_ = max_sig_sq_ = states_[0] * states_[0];
  max_abs_b_ = std::abs(obs_[0]);
  feature_len_ = 1.0 / rates_[0];
  for (std::size_t i = 1; i < m; ++i) {
    const double s2 = states_[i] * states_[i];
    min_sig_sq_ = std::min(min_sig_sq_, s2);
    max_sig_sq_ = std::max(max_sig_sq_, s2);
    max_abs_b_ = std::max(max_abs_b_, std::abs(obs_[i]));
    feature_len_ = std::min(feature_len_, 1.0 / rates_[i]);
  }

  // origin state ~ pi; the segment containing 0 gets independent exponential
  // residuals on both sides (memorylessness of the holding times)
  Rng init(derive_stream(seed, 0));
  std::vector<double> cum_pi(m);
  double acc = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    acc += pi[i];
    cum_pi[i] = acc;
  }
  cum_pi[m - 1] = 1.0;
  origin_state_ = static_cast<int>(init.pick(cum_pi));

  right_edge_.push_back(rng_fwd_.exponential(rates_[origin_state_]));
  left_edge_.push_back(-rng_bwd_.exponential(rates_[origin_state_]));
}

bool EnvironmentPath::covered(double u) const {
  return u >= left_edge_.back() && u < right_edge_.back();
}

EnvState EnvironmentPath::lookup(double u) const {
  int s;
  if (u >= right_edge_[0]) {
    const auto it = std::upper_bound(right_edge_.begin(), right_edge_.end(), u);
    s = right_state_[static_cast<std::size_t>(it - right_edge_.begin()) - 1];
  } else if (u >= left_edge_[0]) {
    s = origin_state_;
  } else {
    const auto it =
        std::lower_bound(left_edge_.begin(), left_edge_.end(), u, std::greater<double>());
    s = left_state_[static_cast<std::size_t>(it - left_edge_.begin()) - 1];
  }
  return {s, states_[s], obs_[s]};
}

EnvironmentPath::Segment EnvironmentPath::segment_at(double u) {
  const auto locate = [&]() -> Segment {
    if (u >= right_edge_[0]) {
      const auto it = std::upper_bound(right_edge_.begin(), right_edge_.end(), u);
      const std::size_t k = static_cast<std::size_t>(it - right_edge_.begin());
      return {right_state_[k - 1], right_edge_[k - 1], right_edge_[k]};
    }
    if (u >= left_edge_[0]) return {origin_state_, left_edge_[0], right_edge_[0]};
    const auto it =
        std::lower_bound(left_edge_.begin(), left_edge_.end(), u, std::greater<double>());
    const std::size_t k = static_cast<std::size_t>(it - left_edge_.begin());
    return {left_state_[k - 1], left_edge_[k], left_edge_[k - 1]};
  };
  if (!synchronized_) {
    if (!covered(u)) extend_to(u);
    return locate();
  }
  {
    std::shared_lock lock(mutex_);
    if (covered(u)) return locate();
  }
  std::unique_lock lock(mutex_);
  if (!covered(u)) extend_to(u);
  return locate();
}

EnvState EnvironmentPath::at(double u) {
  if (!synchronized_) {
    if (!covered(u)) extend_to(u);
    return lookup(u);
  }
  {
    std::shared_lock lock(mutex_);
    if (covered(u)) return lookup(u);
  }
  std::unique_lock lock(mutex_);
  if (!covered(u)) extend_to(u);
  return lookup(u);
}

void EnvironmentPath::extend_to(double u) {
  if (u >= right_edge_.back()) extend_right(u);
  if (u < left_edge_.back()) extend_left(u);
}

void EnvironmentPath::extend_right(double u) {
  int cur = right_state_.empty() ? origin_state_ : right_state_.back();
  while (right_edge_.back() <= u) {
    const int next = static_cast<int>(rng_fwd_.pick(cum_fwd_[cur]));
    right_edge_.push_back(right_edge_.back() + rng_fwd_.exponential(rates_[next]));
    right_state_.push_back(next);
    cur = next;
  }
  note_budget();
}

void EnvironmentPath::extend_left(double u) {
  int cur = left_state_.empty() ? origin_state_ : left_state_.back();
  while (left_edge_.back() > u) {
    const int prev = static_cast<int>(rng_bwd_.pick(cum_bwd_[cur]));
    left_edge_.push_back(left_edge_.back() - rng_bwd_.exponential(rates_[prev]));
    left_state_.push_back(prev);
    cur = prev;
  }
  note_budget();
}

void EnvironmentPath::note_budget() {
  if (cell_budget_ == 0 || budget_exceeded_) return;
  if (segment_count() > cell_budget_) {
    budget_exceeded_ = true;
    std::fprintf(stderr,
                 "mdpsim: environment realization exceeded cell budget (%llu segments); "
                 "consider a larger epsilon or a bigger budget\n",
                 static_cast<unsigned long long>(segment_count()));
  }
}

std::vector<std::pair<int, double>> EnvironmentPath::forward_segments() const {
  std::vector<std::pair<int, double>> out;
  out.reserve(right_state_.size());
  for (std::size_t k = 0; k < right_state_.size(); ++k)
    out.emplace_back(right_state_[k], right_edge_[k + 1] - right_edge_[k]);
  return out;
}

PeriodicEnv::PeriodicEnv(std::vector<double> sigma, std::vector<double> b)
    : sigma_(std::move(sigma)), b_(std::move(b)) {
  if (sigma_.empty() || sigma_.size() != b_.size())
    fail(Err::invalid_environment, "periodic environment needs equal, nonempty sigma/b tables");
  min_sig_sq_ = max_sig_sq_ = sigma_[0] * sigma_[0];
  for (std::size_t k = 0; k < sigma_.size(); ++k) {
    if (!std::isfinite(sigma_[k]) || !std::isfinite(b_[k]))
      fail(Err::invalid_environment, "periodic environment tables must be finite");
    const double s2 = sigma_[k] * sigma_[k];
    if (!(s2 > 0.0))
      fail(Err::invalid_environment, "sigma^2 must be strictly positive everywhere");
    min_sig_sq_ = std::min(min_sig_sq_, s2);
    max_sig_sq_ = std::max(max_sig_sq_, s2);
    max_abs_b_ = std::max(max_abs_b_, std::abs(b_[k]));
  }
}

EnvState PeriodicEnv::at(double u) {
  const double x = u - std::floor(u);
  std::size_t k = static_cast<std::size_t>(x * static_cast<double>(sigma_.size()));
  if (k >= sigma_.size()) k = sigma_.size() - 1;
  return {static_cast<int>(k), sigma_[k], b_[k]};
}

ChainEnvProvider::ChainEnvProvider(ChainSpec spec, bool quenched, std::uint64_t quenched_seed,
                                   std::uint64_t cell_budget)
    : spec_(std::move(spec)), cell_budget_(cell_budget) {
  pi_ = stationary_dist(spec_);
  proto_ = std::make_shared<EnvironmentPath>(spec_, pi_, 0, 0);
  if (quenched)
    shared_ = std::make_shared<EnvironmentPath>(spec_, pi_, quenched_seed, cell_budget_,
                                                /*synchronized=*/true);
}

std::shared_ptr<Environment> ChainEnvProvider::acquire(std::uint64_t env_seed) {
  if (shared_) return shared_;
  return std::make_shared<EnvironmentPath>(spec_, pi_, env_seed, cell_budget_);
}

}  // namespace mdpsim
