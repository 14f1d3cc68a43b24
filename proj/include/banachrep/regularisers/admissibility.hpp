#pragma once

// Refutation-style testers for admissibility.  A counterexample is a proof
// that Omega is not admissible; a pass is only statistical evidence.

#include <array>
#include <cstdint>
#include <sstream>
#include <string>
#include <vector>

#include "banachrep/core/errors.hpp"
#include "banachrep/core/pnorm_space.hpp"
#include "banachrep/core/random.hpp"
#include "banachrep/regularisers/regulariser.hpp"

namespace banachrep {

enum class Verdict { pass, counterexample };

inline const char* to_string(Verdict v) { return v == Verdict::pass ? "pass" : "counterexample"; }

struct TangentCounterexample {
  Element<Real> f;
  Element<Real> f_tangent;
  double omega_f = 0.0;
  double omega_shifted = 0.0;  // Omega(f + f_tangent)
};

struct AdmissibilityReport {
  Verdict verdict = Verdict::pass;
  std::size_t samples_tested = 0;
  std::vector<TangentCounterexample> counterexamples;
  std::uint64_t seed = 0;
};

struct RadialWitness {
  Element<Real> f;
  Element<Real> g;
  double omega_f = 0.0;
  double omega_g = 0.0;
};

struct RadialSymmetryReport {
  Verdict verdict = Verdict::pass;
  std::size_t samples_tested = 0;
  std::vector<RadialWitness> witnesses;
  std::uint64_t seed = 0;
};

struct AdmissibilityOptions {
  double tol = 1e-9;
  std::array<double, 4> magnitudes{0.01, 0.1, 1.0, 10.0};
  std::size_t max_recorded = 16;
};

namespace detail {

inline std::string describe(const Element<Real>& f) {
  std::ostringstream os;
  os.precision(17);
  os << "(";
  for (Eigen::Index j = 0; j < f.size(); ++j) os << (j ? ", " : "") << f.coords[j];
  os << ")";
  return os.str();
}

inline double eval_or_throw(const RegulariserSpec& omega, const PNormSpace& space, const Element<Real>& f) {
  try {
    return omega(space, f);
  } catch (const EvaluationError& e) {
    throw EvaluationError(std::string(e.what()) + " at f = " + describe(f));
  }
}

}  // namespace detail

/// Tangent to the norm sphere at f: v - (<J(f), v> / <J(f), f>) f, which J(f)
/// annihilates exactly up to rounding.
inline Element<Real> project_tangent(const PNormSpace& space, const Element<Real>& f, const Element<Real>& v) {
  const Functional<Real> L = duality_map(space, f);
  const double ratio = pairing(space, L, v) / pairing(space, L, f);
  return Element<Real>(v.coords - ratio * f.coords);
}

/// Samples f, a tangent f_T in ker J(f), and checks Omega(f + s f_T) >= Omega(f)
/// over several magnitudes s.
inline AdmissibilityReport test_tangential_monotonicity(const RegulariserSpec& omega, const PNormSpace& space,
                                                        std::size_t n_samples, std::uint64_t seed,
                                                        const AdmissibilityOptions& opt = {}) {
  AdmissibilityReport rep;
  rep.seed = seed;
  Rng rng(seed);
  const auto n = static_cast<Eigen::Index>(space.dim());
  for (std::size_t s = 0; s < n_samples; ++s) {
    Element<Real> f(random_normal(rng, n));
    if (norm(space, f) == 0.0) continue;
    const Element<Real> tangent = project_tangent(space, f, Element<Real>(random_normal(rng, n)));
    ++rep.samples_tested;
    const double base = detail::eval_or_throw(omega, space, f);
    for (double mag : opt.magnitudes) {
      Element<Real> ft(mag * tangent.coords);
      const Element<Real> shifted(f.coords + ft.coords);
      const double val = detail::eval_or_throw(omega, space, shifted);
      if (val < base - opt.tol) {
        rep.verdict = Verdict::counterexample;
        if (rep.counterexamples.size() < opt.max_recorded) rep.counterexamples.push_back({f, std::move(ft), base, val});
      }
    }
  }
  return rep;
}

/// Re-checks a recorded counterexample: tangency of f_T at f and strict decrease.
inline bool recheck_counterexample(const RegulariserSpec& omega, const PNormSpace& space,
                                   const TangentCounterexample& cx, double tangency_tol = 1e-10,
                                   double decrease_tol = 1e-9) {
  const double tangency = std::abs(pairing(space, duality_map(space, cx.f), cx.f_tangent));
  const double a = omega(space, cx.f);
  const double b = omega(space, Element<Real>(cx.f.coords + cx.f_tangent.coords));
  return tangency <= tangency_tol && b < a - decrease_tol;
}

/// Samples pairs (f, g) on a common sphere and flags Omega(f) != Omega(g).
inline RadialSymmetryReport test_radial_symmetry(const RegulariserSpec& omega, const PNormSpace& space,
                                                 std::size_t n_samples, std::uint64_t seed,
                                                 const AdmissibilityOptions& opt = {}) {
  RadialSymmetryReport rep;
  rep.seed = seed;
  Rng rng(seed);
  const auto n = static_cast<Eigen::Index>(space.dim());
  for (std::size_t s = 0; s < n_samples; ++s) {
    Element<Real> f(random_normal(rng, n));
    Element<Real> g(random_normal(rng, n));
    const double nf = norm(space, f);
    const double ng = norm(space, g);
    if (nf == 0.0 || ng == 0.0) continue;
    g.coords *= nf / ng;
    ++rep.samples_tested;
    const double a = detail::eval_or_throw(omega, space, f);
    const double b = detail::eval_or_throw(omega, space, g);
    if (std::abs(a - b) > opt.tol) {
      rep.verdict = Verdict::counterexample;
      if (rep.witnesses.size() < opt.max_recorded) rep.witnesses.push_back({f, g, a, b});
    }
  }
  return rep;
}

}  // namespace banachrep
