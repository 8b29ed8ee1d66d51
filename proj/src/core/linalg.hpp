#pragma once

#include <cstddef>
#include <vector>

namespace mdpsim {

// Dense row-major matrix.  Environment chains are small (a handful of states),
// so nothing here tries to be clever.
struct Matrix {
  std::size_t rows = 0, cols = 0;
  std::vector<double> a;

  Matrix() = default;
  Matrix(std::size_t r, std::size_t c) : rows(r), cols(c), a(r * c, 0.0) {}

  double& operator()(std::size_t i, std::size_t j) { return a[i * cols + j]; }
  double operator()(std::size_t i, std::size_t j) const { return a[i * cols + j]; }
};

Matrix transpose(const Matrix& m);
std::vector<double> matvec(const Matrix& m, const std::vector<double>& x);
double dot(const std::vector<double>& x, const std::vector<double>& y);

// Least-squares solution of A x = b via Householder QR; A must have full
// column rank and rows >= cols.
std::vector<double> solve_least_squares(Matrix a, std::vector<double> b);

}  // namespace mdpsim
