#pragma once

// Regularised interpolation:  minimise E((<L_i, f>)_i, y) + lambda Omega(f)
// over all of R^n.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "banachrep/core/errors.hpp"
#include "banachrep/core/optim.hpp"
#include "banachrep/core/pnorm_space.hpp"
#include "banachrep/core/random.hpp"
#include "banachrep/regularisers/regulariser.hpp"
#include "banachrep/solver/min_norm.hpp"
#include "banachrep/solver/problem.hpp"

namespace banachrep {

struct LossSpec {
  enum class Kind { square, absolute };
  Kind kind = Kind::square;

  double operator()(const Eigen::VectorXd& v, const Eigen::VectorXd& y) const {
    const Eigen::VectorXd d = v - y;
    return kind == Kind::square ? d.squaredNorm() : d.cwiseAbs().sum();
  }
};

struct RegularisedOptions {
  int restarts = 8;
  std::uint64_t seed = 0;
  optim::BfgsOptions bfgs{};
};

struct RegularisedResult {
  Element<Real> f;
  double objective = 0.0;
  int converged_runs = 0;
};

inline double regularised_objective(const InterpolationProblem<Real>& problem, const RegulariserSpec& omega,
                                    double lambda, const LossSpec& loss, const Element<Real>& f) {
  return loss(problem.apply(f), problem.targets()) + lambda * omega(problem.space(), f);
}

namespace detail {

// Min-norm interpolant when the constraints are consistent, else the
// least-squares point of minimal Euclidean norm.
inline Eigen::VectorXd regularised_warm_start(const InterpolationProblem<Real>& problem) {
  try {
    return solve_min_norm(problem).f0.coords;
  } catch (const Error&) {
    Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(problem.weighted_matrix());
    return cod.solve(problem.targets());
  }
}

}  // namespace detail

/// Multi-start BFGS on numeric gradients: one run from the min-norm
/// interpolant plus `restarts` random starts.  The warm-start run is kept
/// unless a restart is strictly better, since far from the data directions
/// the objective is flat to rounding and the restarts cannot improve on it.
inline RegularisedResult solve_regularised(const InterpolationProblem<Real>& problem, const RegulariserSpec& omega,
                                           double lambda, const LossSpec& loss = {},
                                           const RegularisedOptions& opt = {}) {
  if (!(lambda > 0.0)) throw InvalidArgument("lambda must be positive");
  const auto n = static_cast<Eigen::Index>(problem.space().dim());
  const auto objective = [&](const Eigen::VectorXd& x) {
    return regularised_objective(problem, omega, lambda, loss, Element<Real>(x));
  };

  const Eigen::VectorXd warm = detail::regularised_warm_start(problem);
  const double scale = std::max(1.0, warm.cwiseAbs().maxCoeff());
  Rng rng(opt.seed);

  std::vector<optim::Result> runs;
  runs.push_back(optim::bfgs_minimize(objective, warm, opt.bfgs));
  for (int r = 0; r < opt.restarts; ++r) {
    runs.push_back(optim::bfgs_minimize(objective, scale * random_normal(rng, n), opt.bfgs));
  }

  std::size_t best = 0;
  int converged = 0;
  for (std::size_t i = 0; i < runs.size(); ++i) {
    if (runs[i].converged) ++converged;
    if (runs[i].value < runs[best].value) best = i;
  }
  const double slack = 1e-12 * (1.0 + std::abs(runs[best].value));
  if (runs[0].value <= runs[best].value + slack) best = 0;

  if (converged == 0) {
    // Accept only if independent runs still agree on the optimal value.
    int agreeing = 0;
    for (const auto& r : runs)
      if (r.value <= runs[best].value + 1e-8 * (1.0 + std::abs(runs[best].value))) ++agreeing;
    if (agreeing < 2) {
      throw NonConvergence("regularised objective stalled at " + detail::num(runs[best].value) +
                           " with disagreeing restarts");
    }
  }
  return {Element<Real>(runs[best].x), runs[best].value, converged};
}

struct PathPoint {
  double lambda = 0.0;
  Element<Real> f;
  double distance = 0.0;  // ||f_lambda - f*||_p, f* the minimal-norm interpolant
  double objective = 0.0;
};

/// Regularised solutions along a decreasing lambda sequence and their
/// distance to the minimal-norm interpolant.
inline std::vector<PathPoint> regularisation_path(const InterpolationProblem<Real>& problem, const RegulariserSpec& omega,
                                                  const LossSpec& loss, const std::vector<double>& lambdas,
                                                  const RegularisedOptions& opt = {}) {
  if (lambdas.empty()) throw InvalidArgument("lambda list is empty");
  for (std::size_t k = 0; k < lambdas.size(); ++k) {
    if (!(lambdas[k] > 0.0)) throw InvalidArgument("lambda values must be positive");
    if (k > 0 && !(lambdas[k] < lambdas[k - 1])) throw InvalidArgument("lambda list must be strictly decreasing");
  }
  const Element<Real> target = solve_min_norm(problem).f0;
  std::vector<PathPoint> out;
  for (double lam : lambdas) {
    RegularisedResult r = solve_regularised(problem, omega, lam, loss, opt);
    PathPoint pt;
    pt.lambda = lam;
    pt.distance = norm(problem.space(), Element<Real>(r.f.coords - target.coords));
    pt.objective = r.objective;
    pt.f = std::move(r.f);
    out.push_back(std::move(pt));
  }
  return out;
}

}  // namespace banachrep
