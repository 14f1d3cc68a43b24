#pragma once

// Small dense optimisers shared by the solvers: damped Newton with a
// finite-difference Hessian, BFGS on numeric gradients, and Nelder-Mead.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <vector>

#include <Eigen/Dense>

namespace banachrep::optim {

using Objective = std::function<double(const Eigen::VectorXd&)>;
using Gradient = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;
using Hessian = std::function<Eigen::MatrixXd(const Eigen::VectorXd&)>;

struct Result {
  Eigen::VectorXd x;
  double value = 0.0;
  int iterations = 0;
  bool converged = false;
};

/// Central-difference Hessian of a function given its exact gradient.
inline Eigen::MatrixXd fd_hessian(const Gradient& grad, const Eigen::VectorXd& x) {
  const Eigen::Index n = x.size();
  Eigen::MatrixXd H(n, n);
  Eigen::VectorXd xp = x;
  for (Eigen::Index k = 0; k < n; ++k) {
    const double h = 1e-6 * std::max(1.0, std::abs(x[k]));
    xp[k] = x[k] + h;
    const Eigen::VectorXd gp = grad(xp);
    xp[k] = x[k] - h;
    const Eigen::VectorXd gm = grad(xp);
    xp[k] = x[k];
    H.col(k) = (gp - gm) / (2.0 * h);
  }
  return 0.5 * (H + H.transpose());
}

/// Central-difference gradient of a scalar function.
inline Eigen::VectorXd fd_gradient(const Objective& f, const Eigen::VectorXd& x) {
  const Eigen::Index n = x.size();
  Eigen::VectorXd g(n);
  Eigen::VectorXd xp = x;
  constexpr double kStep = 6e-6;  // ~ cbrt(machine epsilon)
  for (Eigen::Index k = 0; k < n; ++k) {
    const double h = kStep * std::max(1.0, std::abs(x[k]));
    xp[k] = x[k] + h;
    const double fp = f(xp);
    xp[k] = x[k] - h;
    const double fm = f(xp);
    xp[k] = x[k];
    g[k] = (fp - fm) / (2.0 * h);
  }
  return g;
}

/// Maximises a smooth concave function.  Each iteration solves the Newton
/// system with a finite-difference Hessian and backtracks on the objective;
/// when -H is not safely positive definite a shifted system is tried, and a
/// gradient step is the last resort.
/// Iteration stops once `done(x, grad)` holds.  An exact Hessian may be
/// supplied in place of the finite-difference one.
inline Result newton_maximize(const Objective& value, const Gradient& grad, Eigen::VectorXd x,
                              const std::function<bool(const Eigen::VectorXd&, const Eigen::VectorXd&)>& done,
                              int max_iter, const Hessian& hessian = {}) {
  Result r;
  double fx = value(x);
  Eigen::VectorXd g = grad(x);
  for (int it = 0; it < max_iter; ++it) {
    r.iterations = it;
    if (done(x, g)) {
      r.converged = true;
      break;
    }
    const Eigen::MatrixXd negH = hessian ? Eigen::MatrixXd(-hessian(x)) : Eigen::MatrixXd(-fd_hessian(grad, x));
    Eigen::VectorXd dir;
    Eigen::LDLT<Eigen::MatrixXd> ldlt(negH);
    bool newton_ok = ldlt.info() == Eigen::Success && ldlt.isPositive();
    if (newton_ok) {
      const Eigen::VectorXd d = ldlt.vectorD();
      const double dmax = d.cwiseAbs().maxCoeff();
      newton_ok = dmax > 0.0 && d.minCoeff() > 1e-12 * dmax;
    }
    if (newton_ok) {
      dir = ldlt.solve(g);
      newton_ok = dir.allFinite() && dir.dot(g) > 0.0;
    }
    if (!newton_ok) {
      // Ill-conditioned or indefinite: shift the spectrum before giving up on
      // curvature altogether.
      const double shift = 1e-10 * std::max(negH.diagonal().cwiseAbs().maxCoeff(), 1e-300);
      const Eigen::LLT<Eigen::MatrixXd> llt(negH + shift * Eigen::MatrixXd::Identity(negH.rows(), negH.cols()));
      if (llt.info() == Eigen::Success) {
        dir = llt.solve(g);
        newton_ok = dir.allFinite() && dir.dot(g) > 0.0;
      }
    }
    if (!newton_ok) dir = g;

    const double slope = g.dot(dir);
    const double gnorm = g.norm();
    double t = 1.0;
    bool accepted = false;
    for (int ls = 0; ls < 60; ++ls) {
      const Eigen::VectorXd xn = x + t * dir;
      const double fn = value(xn);
      if (std::isfinite(fn)) {
        if (fn >= fx + 1e-4 * t * slope) {
          x = xn;
          fx = fn;
          accepted = true;
          break;
        }
        // Near the optimum the objective change drowns in rounding; the
        // gradient norm is still a reliable progress measure.
        const Eigen::VectorXd gn = grad(xn);
        if (gn.norm() < (1.0 - 1e-4 * t) * gnorm && fn >= fx - 1e-12 * (1.0 + std::abs(fx))) {
          x = xn;
          fx = fn;
          accepted = true;
          break;
        }
      }
      t *= 0.5;
    }
    if (!accepted) break;
    g = grad(x);
    r.iterations = it + 1;
  }
  if (!r.converged && done(x, g)) r.converged = true;
  r.x = std::move(x);
  r.value = fx;
  return r;
}

struct BfgsOptions {
  int max_iter = 2000;
  double grad_tol = 1e-10;
};

/// BFGS minimisation of f with central-difference gradients and Armijo
/// backtracking.
inline Result bfgs_minimize(const Objective& f, Eigen::VectorXd x, const BfgsOptions& opt = {}) {
  const Eigen::Index n = x.size();
  Result r;
  Eigen::MatrixXd Hinv = Eigen::MatrixXd::Identity(n, n);
  double fx = f(x);
  Eigen::VectorXd g = fd_gradient(f, x);
  int stalls = 0;
  for (int it = 0; it < opt.max_iter; ++it) {
    r.iterations = it;
    if (g.norm() <= opt.grad_tol * (1.0 + std::abs(fx))) {
      r.converged = true;
      break;
    }
    Eigen::VectorXd d = -Hinv * g;
    if (d.dot(g) >= 0.0) {
      Hinv.setIdentity();
      d = -g;
    }
    double t = 1.0;
    bool accepted = false;
    Eigen::VectorXd xn;
    double fn = fx;
    for (int ls = 0; ls < 60; ++ls) {
      xn = x + t * d;
      fn = f(xn);
      if (std::isfinite(fn) && fn <= fx + 1e-4 * t * g.dot(d)) {
        accepted = true;
        break;
      }
      t *= 0.5;
    }
    if (!accepted) {
      // Line search failure after a reset means no descent is measurable.
      if (++stalls > 2) {
        r.converged = g.norm() <= 1e3 * opt.grad_tol * (1.0 + std::abs(fx));
        break;
      }
      Hinv.setIdentity();
      continue;
    }
    stalls = 0;
    const Eigen::VectorXd gn = fd_gradient(f, xn);
    const Eigen::VectorXd s = xn - x;
    const Eigen::VectorXd y = gn - g;
    const double sy = s.dot(y);
    if (sy > 1e-14 * s.norm() * y.norm()) {
      const double rho = 1.0 / sy;
      const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(n, n);
      Hinv = (I - rho * s * y.transpose()) * Hinv * (I - rho * y * s.transpose()) + rho * s * s.transpose();
    }
    const double prev = fx;
    x = xn;
    fx = fn;
    g = gn;
    r.iterations = it + 1;
    if (std::abs(prev - fx) <= 1e-16 * (1.0 + std::abs(fx)) && s.norm() <= 1e-14 * (1.0 + x.norm())) {
      r.converged = true;
      break;
    }
  }
  r.x = std::move(x);
  r.value = fx;
  return r;
}

struct NelderMeadOptions {
  int max_iter = 20000;
  double x_tol = 1e-12;
};

/// Nelder-Mead simplex descent with standard coefficients.
inline Result nelder_mead(const Objective& f, const Eigen::VectorXd& x0, double initial_step,
                          const NelderMeadOptions& opt = {}) {
  const Eigen::Index n = x0.size();
  Result r;
  if (n == 0) {
    r.x = x0;
    r.value = f(x0);
    r.converged = true;
    return r;
  }
  std::vector<Eigen::VectorXd> pts(static_cast<std::size_t>(n + 1), x0);
  for (Eigen::Index k = 0; k < n; ++k) pts[static_cast<std::size_t>(k + 1)][k] += initial_step;
  std::vector<double> vals(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) vals[i] = f(pts[i]);
  std::vector<std::size_t> order(pts.size());

  for (int it = 0; it < opt.max_iter; ++it) {
    r.iterations = it;
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return vals[a] < vals[b]; });
    const std::size_t best = order.front();
    const std::size_t worst = order.back();
    const std::size_t second = order[order.size() - 2];

    double diam = 0.0;
    for (const auto& pt : pts) diam = std::max(diam, (pt - pts[best]).cwiseAbs().maxCoeff());
    if (diam <= opt.x_tol * (1.0 + pts[best].cwiseAbs().maxCoeff())) {
      r.converged = true;
      break;
    }

    Eigen::VectorXd centroid = Eigen::VectorXd::Zero(n);
    for (std::size_t i = 0; i < pts.size(); ++i)
      if (i != worst) centroid += pts[i];
    centroid /= static_cast<double>(n);

    const Eigen::VectorXd xr = centroid + (centroid - pts[worst]);
    const double fr = f(xr);
    if (fr < vals[best]) {
      const Eigen::VectorXd xe = centroid + 2.0 * (centroid - pts[worst]);
      const double fe = f(xe);
      if (fe < fr) {
        pts[worst] = xe;
        vals[worst] = fe;
      } else {
        pts[worst] = xr;
        vals[worst] = fr;
      }
      continue;
    }
    if (fr < vals[second]) {
      pts[worst] = xr;
      vals[worst] = fr;
      continue;
    }
    const bool outside = fr < vals[worst];
    const Eigen::VectorXd xc = outside ? Eigen::VectorXd(centroid + 0.5 * (xr - centroid))
                                       : Eigen::VectorXd(centroid + 0.5 * (pts[worst] - centroid));
    const double fc = f(xc);
    if (fc < (outside ? fr : vals[worst])) {
      pts[worst] = xc;
      vals[worst] = fc;
      continue;
    }
    for (std::size_t i = 0; i < pts.size(); ++i) {
      if (i == best) continue;
      pts[i] = pts[best] + 0.5 * (pts[i] - pts[best]);
      vals[i] = f(pts[i]);
    }
  }
  const auto it = std::min_element(vals.begin(), vals.end());
  r.x = pts[static_cast<std::size_t>(it - vals.begin())];
  r.value = *it;
  return r;
}

}  // namespace banachrep::optim
