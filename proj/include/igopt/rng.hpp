#ifndef IGOPT_RNG_HPP
#define IGOPT_RNG_HPP

#include <cstdint>
#include <random>

namespace igopt {

// One independently seeded stream per trial; no global RNG state.
using Rng = std::mt19937_64;

inline double uniform01(Rng &rng) {
  return std::uniform_real_distribution<double>(0.0, 1.0)(rng);
}

inline double standard_normal(Rng &rng) {
  return std::normal_distribution<double>(0.0, 1.0)(rng);
}

}  // namespace igopt

#endif
