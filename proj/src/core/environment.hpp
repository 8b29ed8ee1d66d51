#pragma once

#include <cstdint>
#include <limits>
#include <memory>
#include <shared_mutex>
#include <vector>

#include "core/chain.hpp"
#include "core/rng.hpp"

namespace mdpsim {

struct EnvState {
  int state;  // chain state index, or grid cell for periodic environments
  double sigma;
  double b;
};

// A diffusion environment evaluated at spatial coordinate u.  Chain paths
// extend themselves lazily, so at() is not const.
class Environment {
 public:
  virtual ~Environment() = default;
  virtual EnvState at(double u) = 0;
  virtual double min_sigma_sq() const = 0;
  virtual double max_sigma_sq() const = 0;
  virtual double max_abs_b() const = 0;
  // smallest characteristic length of environment features, in units of u;
  // +inf for featureless (constant) environments
  virtual double feature_length() const = 0;
};

// One two-sided realization of the environment chain as a piecewise-constant
// function of u.  Right of the origin segment the embedded chain of the
// generator runs forward; left of it the time-reversed chain runs, which keeps
// the two-sided path stationary.  Segments are append-only: once materialized
// they never change, and forward/backward extensions draw from separate
// streams, so the skeleton does not depend on query order.
class EnvironmentPath final : public Environment {
 public:
  EnvironmentPath(const ChainSpec& spec, const std::vector<double>& pi, std::uint64_t seed,
                  std::uint64_t cell_budget = 0, bool synchronized = false);

  EnvState at(double u) override;
  double min_sigma_sq() const override { return min_sig_sq_; }
  double max_sigma_sq() const override { return max_sig_sq_; }
  double max_abs_b() const override { return max_abs_b_; }
  double feature_length() const override { return feature_len_; }

  // materialized segment [lo, hi) containing u, extending as needed; lets the
  // decomposition walk accrue integrals segment-exactly
  struct Segment {
    int state;
    double lo, hi;
  };
  Segment segment_at(double u);

  int state_at_origin() const { return origin_state_; }
  std::size_t segment_count() const { return 1 + right_state_.size() + left_state_.size(); }
  bool budget_exceeded() const { return budget_exceeded_; }
  double realized_lo() const { return left_edge_.back(); }
  double realized_hi() const { return right_edge_.back(); }

  // forward segment lengths and their states, in order from the origin
  // segment's right edge (used by distribution tests)
  std::vector<std::pair<int, double>> forward_segments() const;

 private:
  EnvState lookup(double u) const;
  bool covered(double u) const;
  void extend_to(double u);
  void extend_right(double u);
  void extend_left(double u);
  void note_budget();

  std::vector<double> states_, obs_;
  std::vector<double> rates_;                  // q_i = -L_ii
  std::vector<std::vector<double>> cum_fwd_;   // per-state jump CDF, forward chain
  std::vector<std::vector<double>> cum_bwd_;   // per-state jump CDF, reversed chain
  Rng rng_fwd_, rng_bwd_;
  int origin_state_ = 0;

  // origin segment is [left_edge_[0], right_edge_[0]); right segment k>=1 is
  // [right_edge_[k-1], right_edge_[k]) with state right_state_[k-1]; left
  // segment k>=1 is [left_edge_[k], left_edge_[k-1]) with state left_state_[k-1]
  std::vector<double> right_edge_, left_edge_;
  std::vector<int> right_state_, left_state_;

  double min_sig_sq_ = 0, max_sig_sq_ = 0, max_abs_b_ = 0, feature_len_ = 0;
  std::uint64_t cell_budget_ = 0;
  bool budget_exceeded_ = false;
  bool synchronized_ = false;
  mutable std::shared_mutex mutex_;
};

// Deterministic period-1 environment tabulated on a uniform grid; cell k
// covers [k/n, (k+1)/n) and the tabulated values are read as cell constants.
class PeriodicEnv final : public Environment {
 public:
  PeriodicEnv(std::vector<double> sigma, std::vector<double> b);

  template <class FS, class FB>
  static PeriodicEnv tabulate(FS&& sigma_fn, FB&& b_fn, std::size_t n) {
    std::vector<double> s(n), b(n);
    for (std::size_t k = 0; k < n; ++k) {
      const double x = (static_cast<double>(k) + 0.5) / static_cast<double>(n);
      s[k] = sigma_fn(x);
      b[k] = b_fn(x);
    }
    return PeriodicEnv(std::move(s), std::move(b));
  }

  EnvState at(double u) override;
  double min_sigma_sq() const override { return min_sig_sq_; }
  double max_sigma_sq() const override { return max_sig_sq_; }
  double max_abs_b() const override { return max_abs_b_; }
  double feature_length() const override {
    return resolution() == 1 ? std::numeric_limits<double>::infinity()
                             : 1.0 / static_cast<double>(resolution());
  }

  std::size_t resolution() const { return sigma_.size(); }
  const std::vector<double>& sigma_table() const { return sigma_; }
  const std::vector<double>& b_table() const { return b_; }

  static constexpr std::size_t default_resolution = 4096;

 private:
  std::vector<double> sigma_, b_;
  double min_sig_sq_ = 0, max_sig_sq_ = 0, max_abs_b_ = 0;
};

// Hands each replica its environment: a fresh chain realization per stream
// (annealed), one shared synchronized realization (quenched), or the same
// read-only periodic table.
class EnvProvider {
 public:
  virtual ~EnvProvider() = default;
  virtual std::shared_ptr<Environment> acquire(std::uint64_t env_seed) = 0;
  virtual const Environment& prototype() const = 0;
};

class ChainEnvProvider final : public EnvProvider {
 public:
  ChainEnvProvider(ChainSpec spec, bool quenched, std::uint64_t quenched_seed,
                   std::uint64_t cell_budget = 0);
  std::shared_ptr<Environment> acquire(std::uint64_t env_seed) override;
  const Environment& prototype() const override { return *proto_; }
  const ChainSpec& spec() const { return spec_; }
  const std::vector<double>& pi() const { return pi_; }

 private:
  ChainSpec spec_;
  std::vector<double> pi_;
  std::uint64_t cell_budget_;
  std::shared_ptr<EnvironmentPath> shared_;  // quenched mode only
  std::shared_ptr<EnvironmentPath> proto_;
};

class PeriodicEnvProvider final : public EnvProvider {
 public:
  explicit PeriodicEnvProvider(PeriodicEnv env)
      : env_(std::make_shared<PeriodicEnv>(std::move(env))) {}
  std::shared_ptr<Environment> acquire(std::uint64_t) override { return env_; }
  const Environment& prototype() const override { return *env_; }
  const PeriodicEnv& env() const { return *env_; }

 private:
  std::shared_ptr<PeriodicEnv> env_;
};

}  // namespace mdpsim
