#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "core/chain.hpp"
#include "core/chain_algebra.hpp"
#include "core/errors.hpp"
#include "support/oracles.hpp"

using namespace mdpsim;

namespace {

ChainSpec two_state() {
  ChainSpec spec;
  spec.states = {1.0, 2.0};
  spec.observable = {1.0, 0.0};
  spec.generator = Matrix(2, 2);
  spec.generator(0, 0) = -1.0;
  spec.generator(0, 1) = 1.0;
  spec.generator(1, 0) = 1.0;
  spec.generator(1, 1) = -1.0;
  return spec;
}

}  // namespace

TEST_CASE("drift and diffusion centered observables, two-state by hand") {
  const auto spec = two_state();
  const auto pi = stationary_dist(spec);

  const auto drift = drift_theta(spec, pi);
  CHECK(drift.centering == doctest::Approx(0.8).epsilon(1e-14));
  CHECK(drift.f[0] == doctest::Approx(0.2).epsilon(1e-13));
  CHECK(drift.f[1] == doctest::Approx(-0.2).epsilon(1e-13));
  CHECK(std::abs(dot(pi, drift.f)) <= 1e-12);

  const auto diff = diffusion_theta(spec, pi);
  CHECK(diff.centering == doctest::Approx(1.6).epsilon(1e-14));
  CHECK(diff.f[0] == doctest::Approx(-0.6).epsilon(1e-13));
  CHECK(diff.f[1] == doctest::Approx(0.6).epsilon(1e-13));
  CHECK(std::abs(dot(pi, diff.f)) <= 1e-12);
}

TEST_CASE("constant observable centers to zero") {
  auto spec = two_state();
  spec.observable = {3.25, 3.25};
  const auto pi = stationary_dist(spec);
  const auto th = drift_theta(spec, pi);
  CHECK(th.centering == doctest::Approx(3.25).epsilon(1e-14));
  CHECK(std::abs(th.f[0]) <= 1e-14);
  CHECK(std::abs(th.f[1]) <= 1e-14);
}

TEST_CASE("poisson solve, two-state by hand") {
  const auto spec = two_state();
  const auto pi = stationary_dist(spec);
  CenteredObservable f{{1.0, -1.0}, 0.0};
  const auto dec = solve_poisson(spec, pi, f);
  CHECK(dec.h[0] == doctest::Approx(-0.5).epsilon(1e-13));
  CHECK(dec.h[1] == doctest::Approx(0.5).epsilon(1e-13));
  CHECK(dec.jump_bound == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(dec.v_bound == doctest::Approx(0.5).epsilon(1e-13));
  CHECK(dec.qv[0] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(dec.qv[1] == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("zero observable solves to zero") {
  const auto spec = two_state();
  const auto pi = stationary_dist(spec);
  CenteredObservable f{{0.0, 0.0}, 0.0};
  const auto dec = solve_poisson(spec, pi, f);
  CHECK(dec.h[0] == 0.0);
  CHECK(dec.h[1] == 0.0);
  CHECK(dec.jump_bound == 0.0);
  CHECK(dec.qv[0] == 0.0);
  CHECK(dec.qv[1] == 0.0);
}

TEST_CASE("poisson residuals against a normal-equation oracle, random specs") {
  Rng rng(99);
  for (int rep = 0; rep < 50; ++rep) {
    const std::size_t m = 3 + static_cast<std::size_t>(rng.uniform01() * 3.0);
    const auto spec = oracle::random_spec(m, rng);
    const auto pi = stationary_dist(spec);
    std::vector<double> psi(m);
    for (auto& v : psi) v = 2.0 * rng.uniform01() - 1.0;
    const auto f = center(spec, pi, psi);
    const auto dec = solve_poisson(spec, pi, f);

    const auto lh = matvec(spec.generator, dec.h);
    for (std::size_t i = 0; i < m; ++i) CHECK(std::abs(lh[i] - f.f[i]) <= 1e-10);
    CHECK(std::abs(dot(pi, dec.h)) <= 1e-10);

    // independent route: normal equations on the same augmented system
    Matrix a(m + 1, m);
    std::vector<double> rhs(m + 1, 0.0);
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t j = 0; j < m; ++j) a(i, j) = spec.generator(i, j);
      rhs[i] = f.f[i];
    }
    for (std::size_t j = 0; j < m; ++j) a(m, j) = pi[j];
    const auto ref = oracle::least_squares_normal_eq(a, rhs);
    for (std::size_t i = 0; i < m; ++i) CHECK(std::abs(dec.h[i] - ref[i]) <= 1e-8);

    // nonnegative quadratic-variation density
    for (double mi : dec.qv) CHECK(mi >= -1e-12);
  }
}

TEST_CASE("adding a constant to psi does not change the corrector") {
  Rng rng(123);
  const auto spec = oracle::random_spec(4, rng);
  const auto pi = stationary_dist(spec);
  std::vector<double> psi(4), shifted(4);
  for (std::size_t i = 0; i < 4; ++i) {
    psi[i] = rng.uniform01();
    shifted[i] = psi[i] + 17.5;
  }
  const auto dec_a = solve_poisson(spec, pi, center(spec, pi, psi));
  const auto dec_b = solve_poisson(spec, pi, center(spec, pi, shifted));
  for (std::size_t i = 0; i < 4; ++i) CHECK(std::abs(dec_a.h[i] - dec_b.h[i]) <= 1e-11);
}

TEST_CASE("uncentered observable is rejected") {
  const auto spec = two_state();
  const auto pi = stationary_dist(spec);
  CenteredObservable f{{1.0, 1.0}, 0.0};
  CHECK_THROWS_AS(solve_poisson(spec, pi, f), Error);
}

TEST_CASE("indicator outer-product identity: I I^T = diag(I) for basis vectors") {
  const std::size_t m = 4;
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t r = 0; r < m; ++r)
      for (std::size_t c = 0; c < m; ++c) {
        const double outer = (r == i ? 1.0 : 0.0) * (c == i ? 1.0 : 0.0);
        const double diag = (r == c && r == i) ? 1.0 : 0.0;
        CHECK(outer == diag);
      }
  }
}

TEST_CASE("qv density equals the jump-rate form sum_j L_ij (h_j - h_i)^2") {
  Rng rng(2718);
  const auto spec = oracle::random_spec(5, rng);
  const auto pi = stationary_dist(spec);
  std::vector<double> psi(5);
  for (auto& v : psi) v = 2.0 * rng.uniform01() - 1.0;
  const auto dec = solve_poisson(spec, pi, center(spec, pi, psi));
  const auto qv = qv_density(spec, dec.h);
  for (std::size_t i = 0; i < 5; ++i) {
    double alt = 0.0;
    for (std::size_t j = 0; j < 5; ++j) {
      if (j == i) continue;
      const double d = dec.h[j] - dec.h[i];
      alt += spec.generator(i, j) * d * d;
    }
    CHECK(qv[i] == doctest::Approx(alt).epsilon(1e-12));
  }
}
