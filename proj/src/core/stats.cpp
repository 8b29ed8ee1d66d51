#include "core/stats.hpp"

#include <cmath>

#include "core/errors.hpp"

namespace mdpsim {

namespace {

double log_binom_pmf(long j, long n, double p) {
  return std::lgamma(n + 1.0) - std::lgamma(j + 1.0) - std::lgamma(n - j + 1.0) +
         j * std::log(p) + (n - j) * std::log1p(-p);
}

}  // namespace

double binom_cdf(long k, long n, double p) {
  if (k < 0) return 0.0;
  if (k >= n) return 1.0;
  if (p <= 0.0) return 1.0;
  if (p >= 1.0) return 0.0;
  // sum whichever tail is shorter
  if (k + 1 <= n - k) {
    double s = 0.0;
    for (long j = 0; j <= k; ++j) s += std::exp(log_binom_pmf(j, n, p));
    return s < 1.0 ? s : 1.0;
  }
  double s = 0.0;
  for (long j = k + 1; j <= n; ++j) s += std::exp(log_binom_pmf(j, n, p));
  const double c = 1.0 - s;
  return c > 0.0 ? c : 0.0;
}

double binom_upper_cl(long k, long n, double conf) {
  if (n <= 0 || k < 0 || k > n) fail(Err::invalid_query, "binom_upper_cl: bad counts");
  if (k >= n) return 1.0;
  const double alpha = 1.0 - conf;
  // smallest p with P(X <= k | p) <= alpha
  double lo = static_cast<double>(k) / n, hi = 1.0;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (binom_cdf(k, n, mid) > alpha)
      lo = mid;
    else
      hi = mid;
  }
  return hi;
}

double binom_lower_cl(long k, long n, double conf) {
  if (n <= 0 || k < 0 || k > n) fail(Err::invalid_query, "binom_lower_cl: bad counts");
  if (k <= 0) return 0.0;
  const double alpha = 1.0 - conf;
  // largest p with P(X >= k | p) <= alpha
  double lo = 0.0, hi = static_cast<double>(k) / n;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double tail = 1.0 - binom_cdf(k - 1, n, mid);
    if (tail < alpha)
      lo = mid;
    else
      hi = mid;
  }
  return lo;
}

}  // namespace mdpsim
