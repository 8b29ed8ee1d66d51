#pragma once

#include <cstdint>
#include <vector>

#include "core/linalg.hpp"

namespace mdpsim {

// Finite-state environment chain: alphabet values a_i, transition intensity
// matrix, and the drift observable g(a_i).
struct ChainSpec {
  std::vector<double> states;
  Matrix generator;
  std::vector<double> observable;

  std::size_t size() const { return states.size(); }
};

// Throws invalid_generator / not_ergodic with a message naming the offender.
void validate(const ChainSpec& spec);

// Invariant distribution: solves pi * Lambda = 0, sum pi = 1 as an augmented
// least-squares system.  Validates the spec first.
std::vector<double> stationary_dist(const ChainSpec& spec);

// Time-reversed intensities L'_ij = pi_j * L_ji / pi_i (same diagonal).
Matrix reversed_generator(const ChainSpec& spec, const std::vector<double>& pi);

}  // namespace mdpsim
