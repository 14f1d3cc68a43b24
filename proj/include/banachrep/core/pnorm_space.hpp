#pragma once

// Weighted finite-dimensional l^p spaces, the bilinear pairing with their
// conjugate l^q spaces, and the duality map with identity gauge.

#include <algorithm>
#include <cassert>
#include <cmath>
#include <complex>
#include <cstddef>
#include <string>
#include <type_traits>
#include <utility>

#include <Eigen/Dense>

#include "banachrep/core/errors.hpp"

namespace banachrep {

using Real = double;
using Complex = std::complex<double>;

template <class S>
using Vector = Eigen::Matrix<S, Eigen::Dynamic, 1>;

template <class S>
using Matrix = Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic>;

template <class S>
inline constexpr bool is_complex_v = !std::is_floating_point_v<S>;

enum class Field { real, complex };

template <class S>
constexpr Field field_of() {
  return is_complex_v<S> ? Field::complex : Field::real;
}

/// Unit phase used by the duality map: sign(z) for reals and conj(z)/|z|
/// for complex scalars, so that phase(z) * z = |z|.  phase(0) = 0.
template <class S>
S conj_phase(const S& z) {
  if constexpr (is_complex_v<S>) {
    const double a = std::abs(z);
    return a == 0.0 ? S(0.0) : std::conj(z) / a;
  } else {
    return z > 0 ? S(1) : (z < 0 ? S(-1) : S(0));
  }
}

template <class S>
double real_part(const S& z) {
  if constexpr (is_complex_v<S>) {
    return z.real();
  } else {
    return z;
  }
}

/// Finite-dimensional l^p space with positive quadrature weights:
///   ||f|| = (sum_j w_j |f_j|^p)^(1/p),   1 < p < inf.
/// The dual is the same weighted space with the conjugate exponent q.
class PNormSpace {
public:
  PNormSpace(std::size_t dim, double p, Field field = Field::real)
      : PNormSpace(p, Eigen::VectorXd::Ones(static_cast<Eigen::Index>(dim)), field) {}

  PNormSpace(double p, Eigen::VectorXd weights, Field field = Field::real)
      : p_(p), weights_(std::move(weights)), field_(field) {
    if (!(p > 1.0) || !std::isfinite(p)) {
      throw InvalidExponent("exponent p must satisfy 1 < p < inf, got " + detail::num(p));
    }
    if (weights_.size() == 0) {
      throw InvalidArgument("space dimension must be positive");
    }
    for (Eigen::Index j = 0; j < weights_.size(); ++j) {
      if (!(weights_[j] > 0.0) || !std::isfinite(weights_[j])) {
        throw InvalidArgument("weights must be strictly positive, weights[" + std::to_string(j) +
                              "] = " + detail::num(weights_[j]));
      }
    }
    q_ = p_ / (p_ - 1.0);
    assert(std::abs(1.0 / p_ + 1.0 / q_ - 1.0) <= 1e-15);
  }

  std::size_t dim() const { return static_cast<std::size_t>(weights_.size()); }
  double p() const { return p_; }
  double q() const { return q_; }
  const Eigen::VectorXd& weights() const { return weights_; }
  Field field() const { return field_; }

  /// The conjugate space (exponent q, same weights).
  PNormSpace conjugate() const { return PNormSpace(q_, weights_, field_); }

private:
  double p_;
  double q_;
  Eigen::VectorXd weights_;
  Field field_;
};

/// Primal vector f in B.
template <class S>
struct Element {
  Vector<S> coords;

  Element() = default;
  explicit Element(Vector<S> c) : coords(std::move(c)) {}
  Eigen::Index size() const { return coords.size(); }
};

/// Dual vector L in B*, acting through the weighted bilinear pairing.
template <class S>
struct Functional {
  Vector<S> coords;

  Functional() = default;
  explicit Functional(Vector<S> c) : coords(std::move(c)) {}
  Eigen::Index size() const { return coords.size(); }
};

namespace detail {

inline void check_dim(const PNormSpace& space, Eigen::Index n, const char* what) {
  if (static_cast<std::size_t>(n) != space.dim()) {
    throw DimensionMismatch(std::string(what) + " has length " + std::to_string(n) +
                            ", space has dimension " + std::to_string(space.dim()));
  }
}

template <class S>
void check_field(const PNormSpace& space) {
  // real vectors embed in a complex space, not the other way round
  if constexpr (is_complex_v<S>) {
    if (space.field() != Field::complex) {
      throw InvalidArgument("complex coordinates used in a real space");
    }
  }
}

// Weighted r-norm, scaled by max |x_j| to stay clear of over/underflow.
template <class S>
double weighted_norm(const Eigen::VectorXd& w, const Vector<S>& x, double r) {
  double scale = 0.0;
  for (Eigen::Index j = 0; j < x.size(); ++j) scale = std::max(scale, std::abs(x[j]));
  if (scale == 0.0) return 0.0;
  double sum = 0.0;
  for (Eigen::Index j = 0; j < x.size(); ++j) {
    const double a = std::abs(x[j]) / scale;
    if (a != 0.0) sum += w[j] * std::pow(a, r);
  }
  return scale * std::pow(sum, 1.0 / r);
}

// J_r(x)_j = ||x||^(2-r) |x_j|^(r-1) phase(x_j), evaluated as
// ||x|| * (|x_j| / ||x||)^(r-1) * phase(x_j).
template <class S>
Vector<S> duality_map_r(const Eigen::VectorXd& w, const Vector<S>& x, double r) {
  Vector<S> out = Vector<S>::Zero(x.size());
  const double nx = weighted_norm(w, x, r);
  if (nx == 0.0) return out;
  for (Eigen::Index j = 0; j < x.size(); ++j) {
    const double a = std::abs(x[j]);
    if (a == 0.0) continue;
    out[j] = conj_phase(x[j]) * (nx * std::pow(a / nx, r - 1.0));
  }
  return out;
}

}  // namespace detail

template <class S>
double norm(const PNormSpace& space, const Element<S>& f) {
  detail::check_dim(space, f.size(), "element");
  detail::check_field<S>(space);
  return detail::weighted_norm(space.weights(), f.coords, space.p());
}

template <class S>
double dual_norm(const PNormSpace& space, const Functional<S>& L) {
  detail::check_dim(space, L.size(), "functional");
  detail::check_field<S>(space);
  return detail::weighted_norm(space.weights(), L.coords, space.q());
}

/// <L, f> = sum_j w_j L_j f_j (bilinear, no conjugation).
template <class S>
S pairing(const PNormSpace& space, const Functional<S>& L, const Element<S>& f) {
  detail::check_dim(space, L.size(), "functional");
  detail::check_dim(space, f.size(), "element");
  S acc = S(0);
  const auto& w = space.weights();
  for (Eigen::Index j = 0; j < f.size(); ++j) acc += w[j] * L.coords[j] * f.coords[j];
  return acc;
}

/// J(f): the unique functional with <J(f), f> = ||f||^2 and ||J(f)||_q = ||f||.
template <class S>
Functional<S> duality_map(const PNormSpace& space, const Element<S>& f) {
  detail::check_dim(space, f.size(), "element");
  detail::check_field<S>(space);
  return Functional<S>(detail::duality_map_r(space.weights(), f.coords, space.p()));
}

/// Duality map of the conjugate space; inverse of duality_map.
template <class S>
Element<S> inverse_duality_map(const PNormSpace& space, const Functional<S>& L) {
  detail::check_dim(space, L.size(), "functional");
  detail::check_field<S>(space);
  return Element<S>(detail::duality_map_r(space.weights(), L.coords, space.q()));
}

/// ||L||_q ||f||_p - Re<L, f>.  Non-negative by Hölder up to rounding (the raw
/// value is returned, so tiny negatives stay visible); zero iff L peaks at f.
template <class S>
double peaking_gap(const PNormSpace& space, const Functional<S>& L, const Element<S>& f) {
  return dual_norm(space, L) * norm(space, f) - real_part(pairing(space, L, f));
}

}  // namespace banachrep
