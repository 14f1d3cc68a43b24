#pragma once

#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "banachrep/core/errors.hpp"
#include "banachrep/core/pnorm_space.hpp"

namespace banachrep {

/// Finitely many linear constraints <L_i, f> = y_i on a weighted l^p space.
template <class S>
class InterpolationProblem {
public:
  InterpolationProblem(PNormSpace space, std::vector<Functional<S>> functionals, Vector<S> targets)
      : space_(std::move(space)), functionals_(std::move(functionals)), targets_(std::move(targets)) {
    if (functionals_.empty()) throw InvalidArgument("at least one functional is required");
    if (static_cast<std::size_t>(targets_.size()) != functionals_.size()) {
      throw DimensionMismatch("functionals has " + std::to_string(functionals_.size()) +
                              " rows but targets has length " + std::to_string(targets_.size()));
    }
    for (std::size_t i = 0; i < functionals_.size(); ++i) {
      detail::check_dim(space_, functionals_[i].size(), "functional");
      if (functionals_[i].coords.cwiseAbs().maxCoeff() == 0.0) {
        throw InvalidArgument("functional " + std::to_string(i) + " is zero");
      }
    }
    detail::check_field<S>(space_);
  }

  const PNormSpace& space() const { return space_; }
  const std::vector<Functional<S>>& functionals() const { return functionals_; }
  const Vector<S>& targets() const { return targets_; }
  std::size_t num_constraints() const { return functionals_.size(); }

  /// Row i holds w_j L_ij, so (A f)_i = <L_i, f>.
  Matrix<S> weighted_matrix() const {
    const auto m = static_cast<Eigen::Index>(functionals_.size());
    const auto n = static_cast<Eigen::Index>(space_.dim());
    Matrix<S> A(m, n);
    for (Eigen::Index i = 0; i < m; ++i) {
      A.row(i) = functionals_[static_cast<std::size_t>(i)].coords.transpose().cwiseProduct(
          space_.weights().template cast<S>().transpose());
    }
    return A;
  }

  /// Functional sum_i c_i L_i.
  Functional<S> combine(const Vector<S>& c) const {
    Vector<S> g = Vector<S>::Zero(static_cast<Eigen::Index>(space_.dim()));
    for (std::size_t i = 0; i < functionals_.size(); ++i) g += c[static_cast<Eigen::Index>(i)] * functionals_[i].coords;
    return Functional<S>(std::move(g));
  }

  /// (<L_i, f>)_i
  Vector<S> apply(const Element<S>& f) const { return weighted_matrix() * f.coords; }

private:
  PNormSpace space_;
  std::vector<Functional<S>> functionals_;
  Vector<S> targets_;
};

/// Rank and consistency of the constraint rows.
struct ConstraintAnalysis {
  Eigen::Index rank = 0;
  std::vector<Eigen::Index> independent_rows;
  bool consistent = true;
  double residual = 0.0;
};

inline constexpr double kRankTolerance = 1e-10;

template <class S>
ConstraintAnalysis analyze_constraints(const InterpolationProblem<S>& problem) {
  const Matrix<S> A = problem.weighted_matrix();
  ConstraintAnalysis out;

  // Pivoted QR of A^T: the leading pivots pick a maximal independent row set.
  Eigen::ColPivHouseholderQR<Matrix<S>> qr(A.transpose());
  qr.setThreshold(kRankTolerance);
  out.rank = qr.rank();
  const auto& perm = qr.colsPermutation().indices();
  for (Eigen::Index k = 0; k < out.rank; ++k) out.independent_rows.push_back(perm[k]);

  Eigen::CompleteOrthogonalDecomposition<Matrix<S>> cod(A);
  cod.setThreshold(kRankTolerance);
  const Vector<S> f = cod.solve(problem.targets());
  const Vector<S> r = A * f - problem.targets();
  out.residual = r.size() ? r.cwiseAbs().maxCoeff() : 0.0;
  const double ymax = problem.targets().size() ? problem.targets().cwiseAbs().maxCoeff() : 0.0;
  out.consistent = out.residual <= 1e-8 * std::max(1.0, ymax);
  return out;
}

template <class S>
InterpolationProblem<S> restrict_rows(const InterpolationProblem<S>& problem, const std::vector<Eigen::Index>& rows) {
  std::vector<Functional<S>> fs;
  Vector<S> y(static_cast<Eigen::Index>(rows.size()));
  for (std::size_t k = 0; k < rows.size(); ++k) {
    fs.push_back(problem.functionals()[static_cast<std::size_t>(rows[k])]);
    y[static_cast<Eigen::Index>(k)] = problem.targets()[rows[k]];
  }
  return InterpolationProblem<S>(problem.space(), std::move(fs), std::move(y));
}

}  // namespace banachrep
