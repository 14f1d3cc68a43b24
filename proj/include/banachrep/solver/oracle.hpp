#pragma once

// Brute-force reference minimiser over the feasible affine set
// { f_part + N z }, N an orthonormal null-space basis of the constraint
// matrix.  Independent of the dual machinery in min_norm.hpp.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <string>

#include <Eigen/Dense>

#include "banachrep/core/errors.hpp"
#include "banachrep/core/optim.hpp"
#include "banachrep/core/pnorm_space.hpp"
#include "banachrep/solver/problem.hpp"

namespace banachrep {

struct OracleOptions {
  int grid_points = 11;  // per null-space axis
  int refinements = 8;
  int max_null_dim = 3;
  double polish_tol = 1e-13;
};

/// Orthogonal split of the feasible set of a real problem.
struct AffineFeasibleSet {
  Eigen::VectorXd particular;  // minimum Euclidean norm solution, orthogonal to the null space
  Eigen::MatrixXd null_basis;  // orthonormal columns
};

inline AffineFeasibleSet feasible_set(const InterpolationProblem<Real>& problem) {
  const Eigen::MatrixXd A = problem.weighted_matrix();
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(A, Eigen::ComputeFullU | Eigen::ComputeFullV);
  svd.setThreshold(kRankTolerance);
  const Eigen::Index rank = svd.rank();
  AffineFeasibleSet out;
  out.particular = svd.solve(problem.targets());
  const Eigen::VectorXd r = A * out.particular - problem.targets();
  const double ymax = problem.targets().cwiseAbs().maxCoeff();
  if (r.cwiseAbs().maxCoeff() > 1e-8 * std::max(1.0, ymax)) {
    throw Infeasible("inconsistent constraints: least-squares residual " + detail::num(r.cwiseAbs().maxCoeff()));
  }
  out.null_basis = svd.matrixV().rightCols(A.cols() - rank);
  return out;
}

/// Minimises `objective` over the feasible set by coarse grid refinement on
/// the null-space coordinates followed by simplex polishing.
inline Element<Real> oracle_minimize(const InterpolationProblem<Real>& problem,
                                     const std::function<double(const Element<Real>&)>& objective,
                                     const OracleOptions& opt = {}) {
  const AffineFeasibleSet fs = feasible_set(problem);
  const Eigen::Index k = fs.null_basis.cols();
  if (k > opt.max_null_dim) {
    throw NullSpaceTooLarge("null space has dimension " + std::to_string(k) + ", oracle supports at most " +
                            std::to_string(opt.max_null_dim));
  }
  const auto at = [&](const Eigen::VectorXd& z) { return Element<Real>(fs.particular + fs.null_basis * z); };
  if (k == 0) return at(Eigen::VectorXd(0));

  const auto obj = [&](const Eigen::VectorXd& z) { return objective(at(z)); };

  // Any minimiser of an increasing function of the p-norm has ||f||_p no larger
  // than at f_part, and since f_part is orthogonal to N, |z|_2 <= ||f||_2.
  const PNormSpace& sp = problem.space();
  const double n = static_cast<double>(sp.dim());
  const double wmin = sp.weights().minCoeff();
  const double to_l2 = std::max(1.0, std::pow(n, 0.5 - 1.0 / sp.p())) / std::pow(wmin, 1.0 / sp.p());
  double radius = 1.05 * to_l2 * norm(sp, Element<Real>(fs.particular)) + 1e-8;

  Eigen::VectorXd center = Eigen::VectorXd::Zero(k);
  double best_val = obj(center);
  Eigen::VectorXd best = center;
  const int g = std::max(3, opt.grid_points);
  for (int round = 0; round <= opt.refinements; ++round) {
    Eigen::VectorXi idx = Eigen::VectorXi::Zero(k);
    const double step = 2.0 * radius / (g - 1);
    while (true) {
      Eigen::VectorXd z(k);
      for (Eigen::Index d = 0; d < k; ++d) z[d] = center[d] - radius + step * idx[d];
      const double v = obj(z);
      if (v < best_val) {
        best_val = v;
        best = z;
      }
      Eigen::Index d = 0;
      while (d < k && ++idx[d] == g) idx[d++] = 0;
      if (d == k) break;
    }
    center = best;
    radius = 1.5 * step;
  }

  optim::NelderMeadOptions nm;
  nm.x_tol = opt.polish_tol;
  optim::Result r = optim::nelder_mead(obj, best, radius, nm);
  // A restart from the polished point shakes out premature simplex collapse.
  r = optim::nelder_mead(obj, r.x, std::max(1e-6, 1e-3 * radius), nm);
  return at(r.x);
}

/// Reference minimal-norm solution.
inline Element<Real> oracle_min_norm(const InterpolationProblem<Real>& problem, const OracleOptions& opt = {}) {
  const PNormSpace& sp = problem.space();
  return oracle_minimize(
      problem, [&sp](const Element<Real>& f) { return norm(sp, f); }, opt);
}

}  // namespace banachrep
