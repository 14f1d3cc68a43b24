#pragma once

#include <cmath>

#include <Eigen/Dense>

#include "banachrep/core/errors.hpp"
#include "banachrep/core/pnorm_space.hpp"
#include "banachrep/core/quadrature.hpp"
#include "banachrep/regularisers/regulariser.hpp"

namespace banachrep {

/// Radial mollification along the ray through a unit direction f0:
///
///   Omega~(s f0) = int_{-1}^{0} rho(t) Omega((s - t) f0) dt,
///   rho(t) = C exp(-1 / (1 - (2t + 1)^2))  on (-1, 0).
///
/// The integral is a Gauss-Legendre sum; C is fixed so that the same rule
/// integrates rho to exactly 1.  All effective weights are positive, so the
/// mollified map is nondecreasing in s whenever Omega is along the ray.
class RadialMollifier {
public:
  explicit RadialMollifier(int order = 64) {
    if (order < 2) throw InvalidArgument("quadrature order must be at least 2");
    const QuadratureRule rule = gauss_legendre(order, -1.0, 0.0);
    nodes_ = rule.nodes;
    weights_.resize(order);
    for (int k = 0; k < order; ++k) weights_[k] = rule.weights[k] * bump(rule.nodes[k]);
    weights_ /= weights_.sum();
  }

  /// Unnormalised bump exp(-1 / (1 - (2t + 1)^2)), zero outside (-1, 0).
  static double bump(double t) {
    const double u = 2.0 * t + 1.0;
    if (std::abs(u) >= 1.0) return 0.0;
    return std::exp(-1.0 / (1.0 - u * u));
  }

  double operator()(const RegulariserSpec& omega, const PNormSpace& space, const Element<Real>& f0, double s) const {
    if (s < 0.0) throw InvalidArgument("mollification radius must be non-negative");
    const double n0 = norm(space, f0);
    if (std::abs(n0 - 1.0) > 1e-10) throw InvalidArgument("mollification direction must have unit norm");
    double acc = 0.0;
    for (Eigen::Index k = 0; k < nodes_.size(); ++k) {
      acc += weights_[k] * omega(space, Element<Real>((s - nodes_[k]) * f0.coords));
    }
    return acc;
  }

  /// -int t rho(t) dt under the same rule (1/2 by symmetry of rho).
  double kappa() const { return -weights_.dot(nodes_); }

  const Eigen::VectorXd& nodes() const { return nodes_; }
  const Eigen::VectorXd& weights() const { return weights_; }

private:
  Eigen::VectorXd nodes_;
  Eigen::VectorXd weights_;  // quadrature weight times normalised rho
};

inline double mollify_radial(const RegulariserSpec& omega, const PNormSpace& space, const Element<Real>& f0, double s,
                             int order = 64) {
  return RadialMollifier(order)(omega, space, f0, s);
}

}  // namespace banachrep
