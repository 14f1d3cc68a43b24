#pragma once

// Witness for  J(x0 + z) ∩ (W° - u0) != ∅  with z in a finite-dimensional
// subspace W.  With identity gauge M(x) = 1/2 ||x||^2 and dM = J, so the
// minimiser z of
//
//     G(z) = 1/2 ||x0 + z||^2 + <u0, z>,   z in W,
//
// satisfies <J(x0 + z) + u0, w> = 0 for every w in W: L = J(x0 + z) is the
// witness and L + u0 annihilates W.

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "banachrep/core/errors.hpp"
#include "banachrep/core/optim.hpp"
#include "banachrep/core/pnorm_space.hpp"

namespace banachrep {

struct BlwWitness {
  Element<Real> z;
  Functional<Real> L;
  Eigen::VectorXd coefficients;  // z = sum_k coefficients[k] * W_basis[k]
  double membership_residual = 0.0;
  double annihilator_residual = 0.0;
  int iterations = 0;
};

/// G(z) for z = W alpha.
inline double blw_objective(const PNormSpace& space, const Eigen::MatrixXd& W, const Element<Real>& x0,
                            const Functional<Real>& u0, const Eigen::VectorXd& alpha) {
  const Element<Real> z(W * alpha);
  const double n = norm(space, Element<Real>(x0.coords + z.coords));
  return 0.5 * n * n + pairing(space, u0, z);
}

/// (<J(x0 + W alpha) + u0, w_k>)_k, the gradient of G in alpha.
inline Eigen::VectorXd blw_gradient(const PNormSpace& space, const Eigen::MatrixXd& W, const Element<Real>& x0,
                                    const Functional<Real>& u0, const Eigen::VectorXd& alpha) {
  const Functional<Real> J = duality_map(space, Element<Real>(x0.coords + W * alpha));
  const Functional<Real> sum(J.coords + u0.coords);
  Eigen::VectorXd g(W.cols());
  for (Eigen::Index k = 0; k < W.cols(); ++k) g[k] = pairing(space, sum, Element<Real>(W.col(k)));
  return g;
}

/// Residuals of a candidate witness, computed without reference to how it was found.
inline void certify_blw(const PNormSpace& space, const std::vector<Element<Real>>& W_basis, const Element<Real>& x0,
                        const Functional<Real>& u0, BlwWitness& w) {
  const Element<Real> x(x0.coords + w.z.coords);
  w.membership_residual = std::abs(peaking_gap(space, w.L, x)) + std::abs(dual_norm(space, w.L) - norm(space, x));
  const Functional<Real> shifted(w.L.coords + u0.coords);
  w.annihilator_residual = 0.0;
  for (const auto& b : W_basis) {
    w.annihilator_residual = std::max(w.annihilator_residual, std::abs(pairing(space, shifted, b)));
  }
}

inline BlwWitness beurling_livingston_witness(const PNormSpace& space, const std::vector<Element<Real>>& W_basis,
                                              const Element<Real>& x0, const Functional<Real>& u0, double tol,
                                              int max_iter = 500) {
  detail::check_dim(space, x0.size(), "x0");
  detail::check_dim(space, u0.size(), "u0");
  const auto n = static_cast<Eigen::Index>(space.dim());
  const auto k = static_cast<Eigen::Index>(W_basis.size());
  Eigen::MatrixXd W(n, k);
  for (Eigen::Index c = 0; c < k; ++c) {
    detail::check_dim(space, W_basis[static_cast<std::size_t>(c)].size(), "W basis vector");
    W.col(c) = W_basis[static_cast<std::size_t>(c)].coords;
  }
  if (k > 0) {
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(W);
    qr.setThreshold(1e-10);
    if (qr.rank() < k) throw InvalidArgument("W basis is linearly dependent");
  }

  const auto value = [&](const Eigen::VectorXd& a) { return -blw_objective(space, W, x0, u0, a); };
  const auto grad = [&](const Eigen::VectorXd& a) -> Eigen::VectorXd { return -blw_gradient(space, W, x0, u0, a); };
  const auto done = [&](const Eigen::VectorXd&, const Eigen::VectorXd& g) {
    return g.size() == 0 || g.cwiseAbs().maxCoeff() <= 0.1 * tol;
  };
  const optim::Result r = optim::newton_maximize(value, grad, Eigen::VectorXd::Zero(k), done, max_iter);

  BlwWitness out;
  out.coefficients = r.x;
  out.z = Element<Real>(W * r.x);
  out.L = duality_map(space, Element<Real>(x0.coords + out.z.coords));
  out.iterations = r.iterations;
  certify_blw(space, W_basis, x0, u0, out);
  if (out.annihilator_residual > tol || out.membership_residual > tol) {
    throw NonConvergence("Beurling-Livingston witness residuals membership=" + detail::num(out.membership_residual) +
                         " annihilator=" + detail::num(out.annihilator_residual));
  }
  return out;
}

}  // namespace banachrep
