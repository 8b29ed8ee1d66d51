#pragma once

#include <cmath>
#include <cstddef>

namespace mdpsim {

// Running mean/variance (Welford).
class Accumulator {
 public:
  void add(double x) {
    ++n_;
    const double d = x - mean_;
    mean_ += d / static_cast<double>(n_);
    m2_ += d * (x - mean_);
  }
  std::size_t count() const { return n_; }
  double mean() const { return mean_; }
  double variance() const { return n_ > 1 ? m2_ / static_cast<double>(n_ - 1) : 0.0; }
  double stderr_mean() const {
    return n_ > 1 ? std::sqrt(variance() / static_cast<double>(n_)) : 0.0;
  }

 private:
  std::size_t n_ = 0;
  double mean_ = 0.0, m2_ = 0.0;
};

inline double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

// P(Bin(n,p) <= k), exact, summed over the smaller tail.
double binom_cdf(long k, long n, double p);

// One-sided exact (Clopper-Pearson style) confidence limits for a binomial
// proportion at confidence level `conf` (e.g. 0.99).
double binom_upper_cl(long k, long n, double conf);
double binom_lower_cl(long k, long n, double conf);

}  // namespace mdpsim
