#pragma once

#include <cstdint>
#include <random>

#include <Eigen/Dense>

namespace banachrep {

using Rng = std::mt19937_64;

/// Vector of independent standard normal entries.
inline Eigen::VectorXd random_normal(Rng& rng, Eigen::Index n) {
  std::normal_distribution<double> dist(0.0, 1.0);
  Eigen::VectorXd v(n);
  for (Eigen::Index j = 0; j < n; ++j) v[j] = dist(rng);
  return v;
}

inline double random_uniform(Rng& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

}  // namespace banachrep
