#pragma once

// Quadrature-sampled RKBS isometric to L^p([-1/2, 1/2]) with Fourier features
//
//   Phi(x)(t) = exp(-2 pi i x t),   Phi*(x)(t) = exp(2 pi i x t),
//
// functions f_u(x) = <u, Phi*(x)> and kernel K(x, y) = <Phi(x), Phi*(y)> = sinc(x - y).
// Elements are coefficient vectors u over the Gauss-Legendre grid and
// ||f_u|| := ||u||_{p,w}; no other norm is ever computed.
//
// For a general measure mu on R^d the construction scales f_u by
// mu(R^d)^{-(p-2)/p}; on I = [-1/2, 1/2] with Lebesgue measure mu(I) = 1 and
// the factor is 1.  Only d = 1 is implemented.

#include <cmath>
#include <numbers>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "banachrep/core/errors.hpp"
#include "banachrep/core/pnorm_space.hpp"
#include "banachrep/core/quadrature.hpp"
#include "banachrep/solver/min_norm.hpp"

namespace banachrep::rkbs {

class Rkbs1D {
public:
  Rkbs1D(double p, int nodes) : Rkbs1D(p, make_rule(nodes)) {}

  const Eigen::VectorXd& nodes() const { return nodes_; }
  const Eigen::VectorXd& weights() const { return space_.weights(); }
  const PNormSpace& space() const { return space_; }
  double p() const { return space_.p(); }
  Eigen::Index size() const { return nodes_.size(); }

private:
  static QuadratureRule make_rule(int nodes) {
    if (nodes < 2) throw InvalidArgument("RKBS grid needs at least 2 nodes");
    return gauss_legendre(nodes, -0.5, 0.5);
  }

  Rkbs1D(double p, QuadratureRule rule)
      : nodes_(std::move(rule.nodes)), space_(p, std::move(rule.weights), Field::complex) {}

  Eigen::VectorXd nodes_;
  PNormSpace space_;
};

inline Rkbs1D build_rkbs(double p, int nodes) { return Rkbs1D(p, nodes); }

struct RkbsFunction {
  Eigen::VectorXcd u;
};

struct Features {
  Eigen::VectorXcd primal;  // Phi(x)
  Eigen::VectorXcd dual;    // Phi*(x)
};

inline Features feature(const Rkbs1D& rk, double x) {
  Features out{Eigen::VectorXcd(rk.size()), Eigen::VectorXcd(rk.size())};
  for (Eigen::Index j = 0; j < rk.size(); ++j) {
    const double phase = 2.0 * std::numbers::pi * x * rk.nodes()[j];
    out.dual[j] = Complex(std::cos(phase), std::sin(phase));
    out.primal[j] = std::conj(out.dual[j]);
  }
  return out;
}

inline double sinc(double x) {
  if (x == 0.0) return 1.0;
  const double a = std::numbers::pi * x;
  return std::sin(a) / a;
}

inline constexpr double kImagTolerance = 1e-8;

/// K(x, y) = <Phi(x), Phi*(y)> under the grid weights.
inline double kernel(const Rkbs1D& rk, double x, double y) {
  const Complex k = pairing(rk.space(), Functional<Complex>(feature(rk, x).primal),
                            Element<Complex>(feature(rk, y).dual));
  if (std::abs(k.imag()) > kImagTolerance) {
    throw ImagTooLarge("kernel imaginary part " + detail::num(k.imag()) + " exceeds tolerance");
  }
  return k.real();
}

/// f_u(x) = sum_j w_j u_j exp(2 pi i x t_j).
inline Complex evaluate(const Rkbs1D& rk, const RkbsFunction& fn, double x) {
  detail::check_dim(rk.space(), fn.u.size(), "coefficient vector");
  Complex acc = 0.0;
  for (Eigen::Index j = 0; j < rk.size(); ++j) {
    const double phase = 2.0 * std::numbers::pi * x * rk.nodes()[j];
    acc += rk.weights()[j] * fn.u[j] * Complex(std::cos(phase), std::sin(phase));
  }
  return acc;
}

struct Interpolant {
  RkbsFunction fn;
  /// Dual coefficients c over Phi*(x_i): sum_i c_i Phi*(x_i) = J(u).
  RepresenterSolution<Complex> certificate;
};

/// Minimal ||u||_{L^p} subject to f_u(x_i) = y_i.
inline Interpolant interpolate(const Rkbs1D& rk, const std::vector<double>& points, const std::vector<double>& values,
                               const SolveOptions& opt = {}) {
  if (points.empty() || points.size() != values.size()) {
    throw InvalidArgument("interpolation needs equally many points and values, at least one");
  }
  for (std::size_t i = 0; i < points.size(); ++i)
    for (std::size_t j = i + 1; j < points.size(); ++j)
      if (points[i] == points[j]) throw InvalidArgument("interpolation points must be distinct");

  std::vector<Functional<Complex>> rows;
  Eigen::VectorXcd y(static_cast<Eigen::Index>(values.size()));
  for (std::size_t i = 0; i < points.size(); ++i) {
    rows.emplace_back(feature(rk, points[i]).dual);
    y[static_cast<Eigen::Index>(i)] = values[i];
  }
  const InterpolationProblem<Complex> problem(rk.space(), std::move(rows), std::move(y));
  Interpolant out;
  out.certificate = solve_min_norm(problem, opt);
  out.fn.u = out.certificate.f0.coords;
  return out;
}

/// Coefficient-level dual map  u |u|^(r-2) / ||u||_r^(r-2)  with exponent r
/// and the grid weights.  dual_coefficients(dual_coefficients(u, p), q) = u.
inline Eigen::VectorXcd dual_coefficients(const Eigen::VectorXd& weights, const Eigen::VectorXcd& u, double r) {
  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(u.size());
  const double nu = detail::weighted_norm(weights, u, r);
  if (nu == 0.0) return out;
  for (Eigen::Index j = 0; j < u.size(); ++j) {
    const double a = std::abs(u[j]);
    if (a == 0.0) continue;
    out[j] = (u[j] / a) * (nu * std::pow(a / nu, r - 1.0));
  }
  return out;
}

/// f_u* of an RKBS element; equal to conj(J(u)) of the underlying complex space.
inline RkbsFunction dual_function(const Rkbs1D& rk, const RkbsFunction& fn) {
  return {dual_coefficients(rk.weights(), fn.u, rk.p())};
}

/// Maps a dual element back: (f_u*)* = f_u.
inline RkbsFunction predual_function(const Rkbs1D& rk, const RkbsFunction& dual) {
  return {dual_coefficients(rk.weights(), dual.u, rk.space().q())};
}

}  // namespace banachrep::rkbs
