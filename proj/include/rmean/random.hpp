#pragma once

#include <cstdint>
#include <random>

#include "rmean/core.hpp"

namespace rmean {

using Rng = std::mt19937_64;

/// Derives an independent child seed from (seed, stream) with the splitmix64
/// finalizer. Every sub-seed in the library goes through this function, so a
/// run is reproducible from its root seed alone.
constexpr std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline Vector standard_normal_vector(Rng& rng, Eigen::Index size) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Vector v(size);
  for (Eigen::Index i = 0; i < size; ++i) v[i] = normal(rng);
  return v;
}

/// Uniform point on the unit sphere in R^size.
inline Vector random_unit_vector(Rng& rng, Eigen::Index size) {
  for (;;) {
    Vector v = standard_normal_vector(rng, size);
    const double norm = v.norm();
    if (norm > 0.0) return v / norm;
  }
}

}  // namespace rmean
