#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>

namespace emsim::rng {

// All randomness in the library flows through this engine. mt19937_64 has a
// standard-mandated output sequence, so seeded results are reproducible
// across platforms and standard-library implementations. The samplers below
// are hand-rolled for the same reason: std::*_distribution output is
// implementation-defined.
using Engine = std::mt19937_64;

// Uniform double in [0, 1), 53 bits of entropy.
inline double uniform01(Engine& g) {
  return static_cast<double>(g() >> 11) * 0x1.0p-53;
}

inline double uniform(Engine& g, double lo, double hi) {
  return lo + (hi - lo) * uniform01(g);
}

// Exp(1) variate. log1p(-u) is finite for u in [0, 1).
inline double exponential1(Engine& g) {
  return -std::log1p(-uniform01(g));
}

// Poisson variate by Knuth's product method. exp(-mean) underflows for large
// means, so those are split into independent halves (Poisson is additive).
inline std::uint64_t poisson(Engine& g, double mean) {
  if (!(mean >= 0.0) || !std::isfinite(mean)) {
    throw std::domain_error("poisson: mean must be finite and >= 0");
  }
  if (mean == 0.0) return 0;
  if (mean > 60.0) {
    const double half = mean / 2.0;
    return poisson(g, half) + poisson(g, mean - half);
  }
  const double limit = std::exp(-mean);
  std::uint64_t k = 0;
  double prod = 1.0;
  do {
    ++k;
    prod *= uniform01(g);
  } while (prod > limit);
  return k - 1;
}

}  // namespace emsim::rng
