#pragma once

// Minimal-norm interpolation
//
//     minimise ||f||_p   subject to   <L_i, f> = y_i,  i = 1..m
//
// solved through the concave dual
//
//     D(c) = Re sum_i c_i y_i - 1/2 ||sum_i c_i L_i||_q^2 ,
//
// whose gradient is the constraint residual y - A J_q(sum_i c_i L_i).  At the
// maximiser f0 = J_q(sum_i c_i L_i), so sum_i c_i L_i = J(f0) peaks at f0 and
// carries the optimality certificate.
//
// For p > 2 the dual Hessian blows up wherever sum_i c_i L_i has a zero
// coordinate, so the primal is minimised instead over f_part + N z, with N an
// orthonormal null-space basis, and c is recovered from J(f0) by least squares.

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/Dense>

#include "banachrep/core/errors.hpp"
#include "banachrep/core/optim.hpp"
#include "banachrep/core/pnorm_space.hpp"
#include "banachrep/solver/problem.hpp"

namespace banachrep {

struct SolveOptions {
  double tol = 1e-9;
  int max_iter = 500;
};

template <class S>
struct RepresenterSolution {
  Element<S> f0;
  Vector<S> c;
  double feasibility_residual = 0.0;
  double peaking_residual = 0.0;
  double norm_match_residual = 0.0;
  int iterations = 0;
  std::string method = "dual-newton";
};

struct RepresenterReport {
  double feasibility = 0.0;
  double peaking = 0.0;
  double norm_match = 0.0;
  bool feasibility_ok = false;
  bool peaking_ok = false;
  bool norm_match_ok = false;

  bool passed() const { return feasibility_ok && peaking_ok && norm_match_ok; }
};

namespace detail {

// Real parameterisation of the dual variable: c itself for real scalars,
// (Re c, Im c) stacked for complex ones.
template <class S>
Vector<S> unpack_dual(const Eigen::VectorXd& x, Eigen::Index m) {
  if constexpr (is_complex_v<S>) {
    Vector<S> c(m);
    for (Eigen::Index i = 0; i < m; ++i) c[i] = S(x[i], x[m + i]);
    return c;
  } else {
    return x;
  }
}

template <class S>
Eigen::VectorXd pack_dual(const Vector<S>& c) {
  if constexpr (is_complex_v<S>) {
    const Eigen::Index m = c.size();
    Eigen::VectorXd x(2 * m);
    x.head(m) = c.real();
    x.tail(m) = c.imag();
    return x;
  } else {
    return c;
  }
}

template <class S>
Eigen::VectorXd pack_residual(const Vector<S>& r) {
  if constexpr (is_complex_v<S>) {
    const Eigen::Index m = r.size();
    Eigen::VectorXd x(2 * m);
    x.head(m) = r.real();
    x.tail(m) = -r.imag();
    return x;
  } else {
    return r;
  }
}

template <class S>
Vector<S> conj_if_complex(const Vector<S>& v) {
  if constexpr (is_complex_v<S>) {
    return v.conjugate();
  } else {
    return v;
  }
}

// Real coordinates of a complex vector, (Re v, Im v) stacked.
template <class S>
Eigen::VectorXd realify(const Vector<S>& v) {
  if constexpr (is_complex_v<S>) {
    Eigen::VectorXd x(2 * v.size());
    x << v.real(), v.imag();
    return x;
  } else {
    return v;
  }
}

template <class S>
Vector<S> complexify(const Eigen::VectorXd& x) {
  if constexpr (is_complex_v<S>) {
    const Eigen::Index n = x.size() / 2;
    Vector<S> v(n);
    for (Eigen::Index j = 0; j < n; ++j) v[j] = S(x[j], x[n + j]);
    return v;
  } else {
    return x;
  }
}

// Real matrix acting on realified vectors as N acts on complex ones.
template <class S>
Eigen::MatrixXd realify(const Matrix<S>& N) {
  if constexpr (is_complex_v<S>) {
    Eigen::MatrixXd R(2 * N.rows(), 2 * N.cols());
    R << N.real(), -N.imag(), N.imag(), N.real();
    return R;
  } else {
    return N;
  }
}

// Primal minimisation of (1/p) sum_j w_j |g_j|^p over g = g0 + N x in real
// coordinates; g0 is pre-scaled so that max |g0_j| = 1.
template <class S>
Vector<S> primal_min_norm(const PNormSpace& space, const Vector<S>& g0, const Matrix<S>& N, int max_iter,
                          int& iterations) {
  const Eigen::Index n = g0.size();
  const Eigen::Index blocks = is_complex_v<S> ? 2 : 1;
  const Eigen::VectorXd G0 = realify<S>(g0);
  const Eigen::MatrixXd Nr = realify<S>(N);
  const Eigen::VectorXd& w = space.weights();
  const double p = space.p();
  const auto point = [&](const Eigen::VectorXd& x) { return Eigen::VectorXd(G0 + Nr * x); };
  const auto modulus = [&](const Eigen::VectorXd& G, Eigen::Index j) {
    return blocks == 2 ? std::hypot(G[j], G[n + j]) : std::abs(G[j]);
  };

  const auto value = [&](const Eigen::VectorXd& x) {
    const Eigen::VectorXd G = point(x);
    double sum = 0.0;
    for (Eigen::Index j = 0; j < n; ++j) sum += w[j] * std::pow(modulus(G, j), p);
    return -sum / p;
  };
  const auto grad = [&](const Eigen::VectorXd& x) {
    Eigen::VectorXd G = point(x);
    for (Eigen::Index j = 0; j < n; ++j) {
      const double a = modulus(G, j);
      const double s = a == 0.0 ? 0.0 : w[j] * std::pow(a, p - 2.0);
      for (Eigen::Index b = 0; b < blocks; ++b) G[b * n + j] *= s;
    }
    return Eigen::VectorXd(-(Nr.transpose() * G));
  };
  // Per coordinate: w |g|^(p-2) (I + (p-2) u u^T) with u = g / |g|.
  const auto hessian = [&](const Eigen::VectorXd& x) {
    const Eigen::VectorXd G = point(x);
    Eigen::MatrixXd BN(Nr.rows(), Nr.cols());
    for (Eigen::Index j = 0; j < n; ++j) {
      const double a = modulus(G, j);
      const double s = a == 0.0 ? 0.0 : w[j] * std::pow(a, p - 2.0);
      if (blocks == 1) {
        BN.row(j) = (s * (p - 1.0)) * Nr.row(j);
      } else {
        const double ur = a == 0.0 ? 0.0 : G[j] / a, ui = a == 0.0 ? 0.0 : G[n + j] / a;
        const double b11 = s * (1.0 + (p - 2.0) * ur * ur), b22 = s * (1.0 + (p - 2.0) * ui * ui);
        const double b12 = s * (p - 2.0) * ur * ui;
        const Eigen::RowVectorXd re = Nr.row(j), im = Nr.row(n + j);
        BN.row(j) = b11 * re + b12 * im;
        BN.row(n + j) = b12 * re + b22 * im;
      }
    }
    return Eigen::MatrixXd(-(Nr.transpose() * BN));
  };
  const auto done = [](const Eigen::VectorXd&, const Eigen::VectorXd& g) {
    return g.size() == 0 || g.cwiseAbs().maxCoeff() <= 1e-15;
  };
  const optim::Result res =
      optim::newton_maximize(value, grad, Eigen::VectorXd::Zero(Nr.cols()), done, max_iter, hessian);
  iterations = res.iterations;
  return complexify<S>(point(res.x));
}

}  // namespace detail

/// D(c) = Re <c, y> - 1/2 ||sum c_i L_i||_q^2
template <class S>
double dual_objective(const InterpolationProblem<S>& problem, const Vector<S>& c) {
  const double nq = dual_norm(problem.space(), problem.combine(c));
  S cy = S(0);
  for (Eigen::Index i = 0; i < c.size(); ++i) cy += c[i] * problem.targets()[i];
  return real_part(cy) - 0.5 * nq * nq;
}

/// Primal point J_q(sum c_i L_i) associated with the dual variable c.
template <class S>
Element<S> primal_from_dual(const InterpolationProblem<S>& problem, const Vector<S>& c) {
  return inverse_duality_map(problem.space(), problem.combine(c));
}

/// y - A J_q(A^T c); for real scalars this is exactly grad D(c).
template <class S>
Vector<S> dual_residual(const InterpolationProblem<S>& problem, const Vector<S>& c) {
  return problem.targets() - problem.apply(primal_from_dual(problem, c));
}

/// Recomputes all three certificate residuals from (f0, c) alone.
template <class S>
RepresenterReport verify_representer(const RepresenterSolution<S>& solution, const InterpolationProblem<S>& problem,
                                     double tol) {
  RepresenterReport rep;
  const Vector<S> r = problem.apply(solution.f0) - problem.targets();
  rep.feasibility = r.size() ? r.cwiseAbs().maxCoeff() : 0.0;
  const Functional<S> L = problem.combine(solution.c);
  rep.peaking = peaking_gap(problem.space(), L, solution.f0);
  rep.norm_match = std::abs(dual_norm(problem.space(), L) - norm(problem.space(), solution.f0));
  rep.feasibility_ok = rep.feasibility <= tol;
  rep.peaking_ok = std::abs(rep.peaking) <= tol;
  rep.norm_match_ok = rep.norm_match <= tol;
  return rep;
}

template <class S>
RepresenterSolution<S> solve_min_norm(const InterpolationProblem<S>& problem, const SolveOptions& opt = {}) {
  const ConstraintAnalysis ca = analyze_constraints(problem);
  if (!ca.consistent) {
    throw Infeasible("inconsistent constraints: least-squares residual " + detail::num(ca.residual));
  }

  const auto m_full = static_cast<Eigen::Index>(problem.num_constraints());
  std::vector<Eigen::Index> rows = ca.independent_rows;
  std::sort(rows.begin(), rows.end());
  const InterpolationProblem<S> reduced = restrict_rows(problem, rows);
  const auto m = static_cast<Eigen::Index>(rows.size());

  // Warm start from the exact p = 2 dual: (L W L^H) conj(c) = y.
  const Matrix<S> Aw = reduced.weighted_matrix();
  Matrix<S> L(m, Aw.cols());
  for (Eigen::Index i = 0; i < m; ++i) L.row(i) = reduced.functionals()[static_cast<std::size_t>(i)].coords.transpose();
  const Matrix<S> gram = Aw * L.adjoint();
  const Vector<S> c0 = detail::conj_if_complex<S>(Vector<S>(gram.ldlt().solve(reduced.targets())));

  RepresenterSolution<S> sol;
  sol.c = Vector<S>::Zero(m_full);
  Vector<S> c_red;
  if (problem.space().p() > 2.0 && m > 0) {
    sol.method = "primal-newton";
    // Particular solution and null space from a QR factorisation of A^H.
    const Eigen::HouseholderQR<Matrix<S>> qr(Aw.adjoint());
    const Matrix<S> Q = qr.householderQ();
    const Matrix<S> R = qr.matrixQR().topRows(m).template triangularView<Eigen::Upper>();
    const Vector<S> u = R.adjoint().template triangularView<Eigen::Lower>().solve(reduced.targets());
    const Vector<S> fp = Q.leftCols(m) * u;
    const double scale = fp.cwiseAbs().maxCoeff();
    if (scale == 0.0) {
      sol.f0 = Element<S>(Vector<S>::Zero(fp.size()));
      c_red = Vector<S>::Zero(m);
    } else {
      const Matrix<S> N = Q.rightCols(Aw.cols() - m);
      sol.f0 = Element<S>(Vector<S>(scale * detail::primal_min_norm<S>(reduced.space(), Vector<S>(fp / scale), N,
                                                                      opt.max_iter, sol.iterations)));
      c_red = Matrix<S>(L.transpose()).colPivHouseholderQr().solve(duality_map(reduced.space(), sol.f0).coords);
    }
  } else {
    const auto value = [&](const Eigen::VectorXd& x) { return dual_objective(reduced, detail::unpack_dual<S>(x, m)); };
    const auto grad = [&](const Eigen::VectorXd& x) {
      return detail::pack_residual<S>(dual_residual(reduced, detail::unpack_dual<S>(x, m)));
    };
    const auto done = [&](const Eigen::VectorXd&, const Eigen::VectorXd& g) {
      return g.size() == 0 || g.cwiseAbs().maxCoeff() <= 0.25 * opt.tol;
    };
    Eigen::VectorXd x0 = detail::pack_dual<S>(c0);
    if (!x0.allFinite()) x0.setZero();
    const optim::Result res = optim::newton_maximize(value, grad, x0, done, opt.max_iter);
    c_red = detail::unpack_dual<S>(res.x, m);
    sol.f0 = primal_from_dual(reduced, c_red);
    sol.iterations = res.iterations;
  }
  for (Eigen::Index k = 0; k < m; ++k) sol.c[rows[static_cast<std::size_t>(k)]] = c_red[k];

  const RepresenterReport rep = verify_representer(sol, problem, opt.tol);
  sol.feasibility_residual = rep.feasibility;
  sol.peaking_residual = rep.peaking;
  sol.norm_match_residual = rep.norm_match;
  if (!rep.passed()) {
    throw NonConvergence("min-norm solver stopped after " + std::to_string(sol.iterations) +
                         " iterations with residuals feasibility=" + detail::num(rep.feasibility) +
                         " peaking=" + detail::num(rep.peaking) + " norm_match=" + detail::num(rep.norm_match));
  }
  return sol;
}

}  // namespace banachrep
