#include "core/chain.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "core/errors.hpp"

namespace mdpsim {

namespace {

// reachability over edges with positive intensity
std::vector<bool> reachable(const Matrix& gen, bool reversed) {
  const std::size_t m = gen.rows;
  std::vector<bool> seen(m, false);
  std::vector<std::size_t> stack{0};
  seen[0] = true;
  while (!stack.empty()) {
    const std::size_t i = stack.back();
    stack.pop_back();
    for (std::size_t j = 0; j < m; ++j) {
      if (j == i || seen[j]) continue;
      const double rate = reversed ? gen(j, i) : gen(i, j);
      if (rate > 0.0) {
        seen[j] = true;
        stack.push_back(j);
      }
    }
  }
  return seen;
}

}  // namespace

void validate(const ChainSpec& spec) {
  const std::size_t m = spec.states.size();
  if (m < 2) fail(Err::invalid_generator, "chain needs at least 2 states");
  if (spec.generator.rows != m || spec.generator.cols != m)
    fail(Err::invalid_generator, "generator must be m x m with m = number of states");
  if (spec.observable.size() != m)
    fail(Err::invalid_generator, "observable must have one value per state");

  for (std::size_t i = 0; i < m; ++i) {
    if (spec.states[i] == 0.0)
      fail(Err::invalid_generator, "state value a_" + std::to_string(i) + " must be nonzero");
    for (std::size_t j = i + 1; j < m; ++j)
      if (spec.states[i] == spec.states[j])
        fail(Err::invalid_generator, "state values must be pairwise distinct");
    if (!std::isfinite(spec.observable[i]))
      fail(Err::invalid_generator, "observable must be finite");
  }

  for (std::size_t i = 0; i < m; ++i) {
    double row_sum = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
      const double v = spec.generator(i, j);
      if (!std::isfinite(v)) fail(Err::invalid_generator, "generator has non-finite entry");
      if (i != j && v < 0.0)
        fail(Err::invalid_generator,
             "negative off-diagonal intensity in row " + std::to_string(i));
      row_sum += v;
    }
    if (std::abs(row_sum) > 1e-12)
      fail(Err::invalid_generator, "generator row " + std::to_string(i) +
                                       " does not sum to zero (sum=" + std::to_string(row_sum) + ")");
  }

  const auto fwd = reachable(spec.generator, false);
  const auto bwd = reachable(spec.generator, true);
  for (std::size_t i = 0; i < m; ++i)
    if (!fwd[i] || !bwd[i])
      fail(Err::not_ergodic, "generator is reducible: state " + std::to_string(i) +
                                 " does not communicate with state 0");
}

std::vector<double> stationary_dist(const ChainSpec& spec) {
  validate(spec);
  const std::size_t m = spec.size();

  // rows: Lambda^T pi = 0 stacked with sum(pi) = 1
  Matrix a(m + 1, m);
  std::vector<double> rhs(m + 1, 0.0);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) a(i, j) = spec.generator(j, i);
  for (std::size_t j = 0; j < m; ++j) a(m, j) = 1.0;
  rhs[m] = 1.0;

  auto pi = solve_least_squares(a, rhs);

  double resid = 0.0;
  for (std::size_t j = 0; j < m; ++j) {
    double s = 0.0;
    for (std::size_t i = 0; i < m; ++i) s += pi[i] * spec.generator(i, j);
    resid = std::max(resid, std::abs(s));
  }
  if (resid > 1e-12) fail(Err::solve_failed, "stationary distribution residual too large");
  for (double p : pi)
    if (!(p > 0.0)) fail(Err::solve_failed, "stationary distribution not strictly positive");
  return pi;
}

Matrix reversed_generator(const ChainSpec& spec, const std::vector<double>& pi) {
  const std::size_t m = spec.size();
  Matrix rev(m, m);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) rev(i, j) = pi[j] * spec.generator(j, i) / pi[i];
  return rev;
}

}  // namespace mdpsim
