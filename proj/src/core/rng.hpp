#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace mdpsim {

inline std::uint64_t mix64(std::uint64_t x) {
  x ^= x >> 30;
  x *= 0xbf58476d1ce4e5b9ull;
  x ^= x >> 27;
  x *= 0x94d049bb133111ebull;
  x ^= x >> 31;
  return x;
}

// Counter-based stream derivation: the stream for (master, lane, replica, sub)
// is a pure function of its arguments, so results do not depend on how work is
// scheduled across threads.
inline std::uint64_t derive_stream(std::uint64_t master, std::uint64_t a,
                                   std::uint64_t b = 0, std::uint64_t c = 0) {
  std::uint64_t h = mix64(master + 0x9e3779b97f4a7c15ull);
  h = mix64(h ^ (a + 0xbf58476d1ce4e5b9ull));
  h = mix64(h ^ (b + 0x94d049bb133111ebull));
  h = mix64(h ^ (c + 0x2545f4914f6cdd1dull));
  return h;
}

// mt19937_64 with explicit uniform/normal/exponential transforms.  The
// transforms are spelled out (rather than std::*_distribution) so streams are
// bit-stable across standard library implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  // uniform on (0,1]
  double uniform01() {
    return static_cast<double>((engine_() >> 11) + 1) * 0x1.0p-53;
  }

  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    const double u1 = uniform01();
    const double u2 = uniform01();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
  }

  double exponential(double rate) { return -std::log(uniform01()) / rate; }

  // picks index by inverse CDF over a cumulative row ending at ~1
  template <class Vec>
  std::size_t pick(const Vec& cumulative) {
    const double u = uniform01();
    std::size_t i = 0;
    while (i + 1 < cumulative.size() && u > cumulative[i]) ++i;
    return i;
  }

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace mdpsim
