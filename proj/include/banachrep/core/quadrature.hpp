#pragma once

#include <cmath>
#include <numbers>
#include <stdexcept>

#include <Eigen/Dense>

#include "banachrep/core/errors.hpp"

namespace banachrep {

struct QuadratureRule {
  Eigen::VectorXd nodes;
  Eigen::VectorXd weights;
};

/// N-point Gauss-Legendre rule on [a, b].  Nodes are found by Newton's method
/// on P_N from Chebyshev initial guesses; the rule is mirrored from its upper
/// half so that the nodes are exactly symmetric about (a + b) / 2.
inline QuadratureRule gauss_legendre(int n, double a = -1.0, double b = 1.0) {
  if (n < 1) throw InvalidArgument("Gauss-Legendre rule needs at least one node");
  QuadratureRule rule{Eigen::VectorXd(n), Eigen::VectorXd(n)};
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const int upper = (n + 1) / 2;
  for (int i = 0; i < upper; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 1.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0;
      double p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) <= 1e-16) break;
    }
    // refresh the derivative at the converged node
    double p0 = 1.0;
    double p1 = x;
    for (int k = 2; k <= n; ++k) {
      const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    dp = n * (x * p1 - p0) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    if (2 * i + 1 == n) x = 0.0;  // middle node of an odd rule
    rule.nodes[n - 1 - i] = mid + half * x;
    rule.nodes[i] = mid - half * x;
    rule.weights[n - 1 - i] = half * w;
    rule.weights[i] = half * w;
  }
  return rule;
}

}  // namespace banachrep
