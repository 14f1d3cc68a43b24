#pragma once

#include <algorithm>
#include <string>
#include <vector>

#include "banachrep/core/errors.hpp"
#include "banachrep/core/pnorm_space.hpp"
#include "banachrep/regularisers/regulariser.hpp"
#include "banachrep/solver/min_norm.hpp"
#include "banachrep/solver/oracle.hpp"

namespace banachrep {

struct IndependenceEntry {
  std::string name;
  Element<Real> solution;
  double deviation_from_min_norm = 0.0;
};

struct IndependenceReport {
  Element<Real> min_norm_solution;
  std::vector<IndependenceEntry> entries;
  double max_deviation = 0.0;  // max over all pairs, min-norm solution included
  bool passed = false;
};

/// Solves min { Omega(f) : <L_i, f> = y_i } for each regulariser with the
/// null-space oracle and compares against the dual minimal-norm solution.
/// Every regulariser must be an admissible strictly increasing function of
/// the norm, which makes all of these problems share one solution.
inline IndependenceReport independence_check(const InterpolationProblem<Real>& problem,
                                             const std::vector<RegulariserSpec>& regs, double tol,
                                             const OracleOptions& oracle = {}) {
  if (regs.empty()) throw PreconditionFailed("independence check needs at least one regulariser");
  for (const auto& r : regs) {
    if (!r.claims_admissible) throw PreconditionFailed("regulariser '" + r.source + "' is not admissible");
    if (!r.strictly_increasing) {
      throw PreconditionFailed("regulariser '" + r.source + "' is not a strictly increasing function of the norm");
    }
  }

  const PNormSpace& sp = problem.space();
  IndependenceReport rep;
  rep.min_norm_solution = solve_min_norm(problem).f0;
  std::vector<const Element<Real>*> all{&rep.min_norm_solution};
  rep.entries.reserve(regs.size());
  for (const auto& r : regs) {
    IndependenceEntry e;
    e.name = r.source;
    e.solution = oracle_minimize(
        problem, [&](const Element<Real>& f) { return r(sp, f); }, oracle);
    e.deviation_from_min_norm = norm(sp, Element<Real>(e.solution.coords - rep.min_norm_solution.coords));
    rep.entries.push_back(std::move(e));
  }
  for (const auto& e : rep.entries) all.push_back(&e.solution);
  for (std::size_t i = 0; i < all.size(); ++i)
    for (std::size_t j = i + 1; j < all.size(); ++j)
      rep.max_deviation = std::max(rep.max_deviation, norm(sp, Element<Real>(all[i]->coords - all[j]->coords)));
  rep.passed = rep.max_deviation <= tol;
  return rep;
}

}  // namespace banachrep
