#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>

#include "banachrep/core/errors.hpp"
#include "banachrep/core/pnorm_space.hpp"
#include "banachrep/core/random.hpp"
#include "banachrep/regularisers/admissibility.hpp"

namespace banachrep {

struct TangentWalkResult {
  double t0 = 0.0;
  Element<Real> f_t0;
  Element<Real> tangent;  // unit vector in ker J(f_hat)
  double phi_at_zero = 0.0;
  double bracket_lo = 0.0;
  double bracket_hi = 0.0;
  double phi_lo = 0.0;
  double phi_hi = 0.0;
  double residual = 0.0;  // |phi(t0)|
};

/// Walks from f_hat along a tangent f_T until
///   phi(t) = lambda <J(f_t), f_hat> - ||f_t||^2,   f_t = f_hat + t f_T,
/// changes sign, then bisects for the root.  phi(0) = (lambda - 1)||f_hat||^2 > 0
/// and phi(t) < 0 as soon as ||f_t|| > lambda ||f_hat||, which holds for
/// t > (lambda + 1) ||f_hat|| / ||f_T||.
inline TangentWalkResult tangent_walk(const PNormSpace& space, const Element<Real>& f_hat, double lambda, double tol,
                                      std::optional<Element<Real>> tangent = std::nullopt, std::uint64_t seed = 0) {
  const double nf = norm(space, f_hat);
  if (nf == 0.0) throw InvalidArgument("tangent walk needs f_hat != 0");
  if (!(lambda > 1.0)) throw InvalidArgument("tangent walk needs lambda > 1");

  Element<Real> dir;
  if (tangent) {
    dir = project_tangent(space, f_hat, *tangent);
  } else {
    Rng rng(seed);
    do {
      dir = project_tangent(space, f_hat, Element<Real>(random_normal(rng, f_hat.size())));
    } while (norm(space, dir) == 0.0);
  }
  const double nd = norm(space, dir);
  if (nd == 0.0) throw InvalidArgument("tangent direction is parallel to f_hat");
  dir.coords /= nd;

  const auto point = [&](double t) { return Element<Real>(f_hat.coords + t * dir.coords); };
  const auto phi = [&](double t) {
    const Element<Real> ft = point(t);
    const double n = norm(space, ft);
    return lambda * pairing(space, duality_map(space, ft), f_hat) - n * n;
  };

  TangentWalkResult out;
  out.tangent = dir;
  out.phi_at_zero = phi(0.0);

  const double bound = 2.0 * (lambda + 1.0) * nf;  // ||dir|| = 1
  double lo = 0.0;
  double hi = nf;
  double phi_hi = phi(hi);
  while (phi_hi > 0.0 && hi < bound) {
    lo = hi;
    hi = std::min(2.0 * hi, bound);
    phi_hi = phi(hi);
  }
  if (phi_hi > 0.0) {
    throw BracketNotFound("phi stays positive up to t = " + detail::num(bound));
  }
  out.bracket_lo = lo;
  out.bracket_hi = hi;
  out.phi_lo = phi(lo);
  out.phi_hi = phi_hi;

  double a = lo;
  double b = hi;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (a + b);
    if (mid <= a || mid >= b) break;
    const double v = phi(mid);
    if (v == 0.0) {
      a = b = mid;
      break;
    }
    (v > 0.0 ? a : b) = mid;
  }
  const double pa = std::abs(phi(a));
  const double pb = std::abs(phi(b));
  out.t0 = pa <= pb ? a : b;
  out.f_t0 = point(out.t0);
  out.residual = std::min(pa, pb);
  if (out.residual > tol) {
    throw NonConvergence("tangent walk root residual " + detail::num(out.residual) + " exceeds " + detail::num(tol));
  }
  return out;
}

}  // namespace banachrep
