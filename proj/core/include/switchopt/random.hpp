#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <random>

namespace switchopt {

// Draw helpers on top of std::mt19937_64. The standard <random>
// distributions are implementation-defined, so everything that must be
// reproducible across toolchains derives its values from raw engine output
// through the fixed transforms below.

using Rng = std::mt19937_64;

/// Uniform draw in [0, 1) with 53-bit resolution.
inline double uniform01(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// Uniform integer in [0, n). Rejection sampling, no modulo bias.
inline std::uint64_t uniform_below(Rng& rng, std::uint64_t n) {
  if (n <= 1) return 0;
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
  std::uint64_t x;
  do {
    x = rng();
  } while (x >= limit);
  return x % n;
}

/// Standard normal via Box-Muller. Consumes exactly two engine draws.
inline double standard_normal(Rng& rng) {
  const double u1 = 1.0 - uniform01(rng);  // (0, 1]: keeps log finite
  const double u2 = uniform01(rng);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

/// Exponential waiting time with the given rate (per year, per hour, ...).
/// A zero rate never fires.
inline double exponential_time(Rng& rng, double rate) {
  if (rate <= 0.0) return std::numeric_limits<double>::infinity();
  const double u = 1.0 - uniform01(rng);  // (0, 1]
  return -std::log(u) / rate;
}

}  // namespace switchopt
