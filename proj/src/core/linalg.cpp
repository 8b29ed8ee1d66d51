#include "core/linalg.hpp"

#include <cmath>

#include "core/errors.hpp"

namespace mdpsim {

Matrix transpose(const Matrix& m) {
  Matrix t(m.cols, m.rows);
  for (std::size_t i = 0; i < m.rows; ++i)
    for (std::size_t j = 0; j < m.cols; ++j) t(j, i) = m(i, j);
  return t;
}

std::vector<double> matvec(const Matrix& m, const std::vector<double>& x) {
  std::vector<double> y(m.rows, 0.0);
  for (std::size_t i = 0; i < m.rows; ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < m.cols; ++j) s += m(i, j) * x[j];
    y[i] = s;
  }
  return y;
}

double dot(const std::vector<double>& x, const std::vector<double>& y) {
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
  return s;
}

std::vector<double> solve_least_squares(Matrix a, std::vector<double> b) {
  const std::size_t m = a.rows, n = a.cols;
  if (m < n || b.size() != m) fail(Err::solve_failed, "least squares: bad dimensions");

  // Householder QR, applying reflectors to b as we go.
  for (std::size_t k = 0; k < n; ++k) {
    double norm = 0.0;
    for (std::size_t i = k; i < m; ++i) norm += a(i, k) * a(i, k);
    norm = std::sqrt(norm);
    if (norm == 0.0) fail(Err::solve_failed, "least squares: rank deficient column");
    if (a(k, k) > 0.0) norm = -norm;

    // v = x - norm*e_k, stored in place of column k below the diagonal
    const double akk = a(k, k) - norm;
    a(k, k) = norm;
    double vtv = akk * akk;
    for (std::size_t i = k + 1; i < m; ++i) vtv += a(i, k) * a(i, k);
    if (vtv == 0.0) continue;

    for (std::size_t j = k + 1; j < n; ++j) {
      double s = akk * a(k, j);
      for (std::size_t i = k + 1; i < m; ++i) s += a(i, k) * a(i, j);
      const double f = 2.0 * s / vtv;
      a(k, j) -= f * akk;
      for (std::size_t i = k + 1; i < m; ++i) a(i, j) -= f * a(i, k);
    }
    double s = akk * b[k];
    for (std::size_t i = k + 1; i < m; ++i) s += a(i, k) * b[i];
    const double f = 2.0 * s / vtv;
    b[k] -= f * akk;
    for (std::size_t i = k + 1; i < m; ++i) b[i] -= f * a(i, k);
  }

  // back substitution on the R factor
  std::vector<double> x(n, 0.0);
  for (std::size_t k = n; k-- > 0;) {
    double s = b[k];
    for (std::size_t j = k + 1; j < n; ++j) s -= a(k, j) * x[j];
    if (a(k, k) == 0.0) fail(Err::solve_failed, "least squares: singular R");
    x[k] = s / a(k, k);
  }
  return x;
}

}  // namespace mdpsim
