#include "support/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "core/stats.hpp"

namespace oracle {

using mdpsim::Matrix;

std::vector<double> solve_ge(Matrix a, std::vector<double> b) {
  const std::size_t n = a.rows;
  if (a.cols != n || b.size() != n) throw std::runtime_error("solve_ge: bad dimensions");
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t piv = k;
    for (std::size_t i = k + 1; i < n; ++i)
      if (std::abs(a(i, k)) > std::abs(a(piv, k))) piv = i;
    if (a(piv, k) == 0.0) throw std::runtime_error("solve_ge: singular matrix");
    if (piv != k) {
      for (std::size_t j = 0; j < n; ++j) std::swap(a(k, j), a(piv, j));
      std::swap(b[k], b[piv]);
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      const double f = a(i, k) / a(k, k);
      for (std::size_t j = k; j < n; ++j) a(i, j) -= f * a(k, j);
      b[i] -= f * b[k];
    }
  }
  std::vector<double> x(n, 0.0);
  for (std::size_t k = n; k-- > 0;) {
    double s = b[k];
    for (std::size_t j = k + 1; j < n; ++j) s -= a(k, j) * x[j];
    x[k] = s / a(k, k);
  }
  return x;
}

std::vector<double> stationary_by_ge(const mdpsim::ChainSpec& spec) {
  const std::size_t m = spec.size();
  Matrix a(m, m);
  std::vector<double> rhs(m, 0.0);
  for (std::size_t i = 0; i + 1 < m; ++i)
    for (std::size_t j = 0; j < m; ++j) a(i, j) = spec.generator(j, i);
  for (std::size_t j = 0; j < m; ++j) a(m - 1, j) = 1.0;
  rhs[m - 1] = 1.0;
  return solve_ge(a, rhs);
}

std::vector<double> least_squares_normal_eq(const Matrix& a, const std::vector<double>& b) {
  const std::size_t n = a.cols;
  Matrix ata(n, n);
  std::vector<double> atb(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      double s = 0.0;
      for (std::size_t k = 0; k < a.rows; ++k) s += a(k, i) * a(k, j);
      ata(i, j) = s;
    }
    double s = 0.0;
    for (std::size_t k = 0; k < a.rows; ++k) s += a(k, i) * b[k];
    atb[i] = s;
  }
  return solve_ge(ata, atb);
}

double bm_two_sided_exit_prob(double a, double T) {
  const double s = std::sqrt(T);
  double stay = 0.0;
  for (int k = -40; k <= 40; ++k) {
    const double sign = (k % 2 == 0) ? 1.0 : -1.0;
    stay += sign * (mdpsim::normal_cdf((2.0 * k + 1.0) * a / s) -
                    mdpsim::normal_cdf((2.0 * k - 1.0) * a / s));
  }
  return std::min(1.0, std::max(0.0, 1.0 - stay));
}

double bm_two_sided_exit_prob_spectral(double a, double T) {
  double stay = 0.0;
  for (int j = 0; j < 200; ++j) {
    const double n = 2.0 * j + 1.0;
    const double sign = (j % 2 == 0) ? 1.0 : -1.0;
    const double term =
        (4.0 / (std::numbers::pi * n)) * sign * std::exp(-n * n * std::numbers::pi *
                                                         std::numbers::pi * T / (8.0 * a * a));
    stay += term;
    if (std::abs(term) < 1e-18) break;
  }
  return std::min(1.0, std::max(0.0, 1.0 - stay));
}

namespace {

double kolmogorov_q(double lambda) {
  if (lambda <= 0.0) return 1.0;
  double q = 0.0;
  for (int k = 1; k <= 100; ++k) {
    const double term = std::exp(-2.0 * k * k * lambda * lambda);
    q += (k % 2 == 1 ? 2.0 : -2.0) * term;
    if (term < 1e-16) break;
  }
  return std::min(1.0, std::max(0.0, q));
}

}  // namespace

double ks_statistic(std::vector<double> sample, const std::function<double(double)>& cdf) {
  std::sort(sample.begin(), sample.end());
  const double n = static_cast<double>(sample.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sample.size(); ++i) {
    const double f = cdf(sample[i]);
    d = std::max(d, std::abs(f - static_cast<double>(i) / n));
    d = std::max(d, std::abs(static_cast<double>(i + 1) / n - f));
  }
  return d;
}

double ks_pvalue(double d, std::size_t n) {
  const double sn = std::sqrt(static_cast<double>(n));
  return kolmogorov_q((sn + 0.12 + 0.11 / sn) * d);
}

double ks_two_sample_statistic(std::vector<double> a, std::vector<double> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  double d = 0.0;
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i] <= b[j])
      ++i;
    else
      ++j;
    const double fa = static_cast<double>(i) / static_cast<double>(a.size());
    const double fb = static_cast<double>(j) / static_cast<double>(b.size());
    d = std::max(d, std::abs(fa - fb));
  }
  return d;
}

double ks_two_sample_pvalue(double d, std::size_t n, std::size_t m) {
  const double ne = static_cast<double>(n) * static_cast<double>(m) /
                    static_cast<double>(n + m);
  const double sn = std::sqrt(ne);
  return kolmogorov_q((sn + 0.12 + 0.11 / sn) * d);
}

double chi_square_statistic(const std::vector<long>& observed,
                            const std::vector<double>& expected) {
  double s = 0.0;
  for (std::size_t i = 0; i < observed.size(); ++i) {
    const double d = static_cast<double>(observed[i]) - expected[i];
    s += d * d / expected[i];
  }
  return s;
}

double chi_square_critical_01(int df) {
  // upper 1% points
  switch (df) {
    case 1: return 6.6349;
    case 2: return 9.2103;
    case 3: return 11.3449;
    case 4: return 13.2767;
    case 5: return 15.0863;
    case 6: return 16.8119;
    default: throw std::runtime_error("chi_square_critical_01: df not tabulated");
  }
}

mdpsim::ChainSpec random_spec(std::size_t m, mdpsim::Rng& rng) {
  mdpsim::ChainSpec spec;
  spec.states.resize(m);
  spec.observable.resize(m);
  for (std::size_t i = 0; i < m; ++i) {
    spec.states[i] = 0.5 + 2.5 * rng.uniform01() + static_cast<double>(i) * 3.0;
    spec.observable[i] = 2.0 * rng.uniform01() - 1.0;
  }
  spec.generator = Matrix(m, m);
  for (std::size_t i = 0; i < m; ++i) {
    double row = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
      if (j == i) continue;
      spec.generator(i, j) = 0.1 + 1.9 * rng.uniform01();
      row += spec.generator(i, j);
    }
    spec.generator(i, i) = -row;
  }
  return spec;
}

}  // namespace oracle
