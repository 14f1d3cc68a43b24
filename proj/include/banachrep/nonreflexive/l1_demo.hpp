#pragma once

// Truncations of the l^1 / l^inf pair
//
//   L1 = (1/2, 0, 3/4, 0, 5/6, ...),   L2 = (0, 2/3, 0, 4/5, ...),
//
// i.e. entry i (1-based) is i/(i+1) on odd resp. even i.  Both have sup norm 1
// but attain it on no l^1 unit vector: in every truncation the norming basis
// vector sits at the last index of the right parity, so the norming mass
// escapes to infinity as n grows.
//
// Storage is 0-based; index k in the API is always the 1-based position.

#include <cmath>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "banachrep/core/errors.hpp"

namespace banachrep::nonreflexive {

struct Fraction {
  std::int64_t num = 0;
  std::int64_t den = 1;

  friend bool operator==(const Fraction& a, const Fraction& b) { return a.num * b.den == b.num * a.den; }
  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
};

/// Entry i/(i+1) of L1 (odd i) or L2 (even i), 1-based.
inline Fraction entry_fraction(std::int64_t i) { return {i, i + 1}; }

struct L1Truncation {
  std::int64_t n = 0;
  Eigen::VectorXd L1;
  Eigen::VectorXd L2;
};

inline L1Truncation build_l1_counterexample(std::int64_t n) {
  if (n < 2) throw InvalidArgument("truncation length must be at least 2");
  L1Truncation t{n, Eigen::VectorXd::Zero(n), Eigen::VectorXd::Zero(n)};
  for (std::int64_t i = 1; i <= n; ++i) {
    const double v = static_cast<double>(i) / static_cast<double>(i + 1);
    (i % 2 == 1 ? t.L1 : t.L2)[i - 1] = v;
  }
  return t;
}

struct NormingAnalysis {
  double sup_norm = 0.0;
  std::int64_t attaining_index = 0;  // 1-based; e_k is the l^1 norming vector
  double gap_to_limit = 0.0;         // 1 - sup_norm
};

inline NormingAnalysis norming_analysis(const Eigen::VectorXd& L, std::int64_t n) {
  if (L.size() != n) throw DimensionMismatch("functional length does not match n");
  NormingAnalysis out;
  for (std::int64_t i = 0; i < n; ++i) {
    const double a = std::abs(L[i]);
    if (a > out.sup_norm) {
      out.sup_norm = a;
      out.attaining_index = i + 1;
    }
  }
  out.gap_to_limit = 1.0 - out.sup_norm;
  return out;
}

struct ScanRow {
  std::int64_t n = 0;
  double c1 = 0.0;
  double c2 = 0.0;
  NormingAnalysis analysis;
};

struct ScanReport {
  std::vector<ScanRow> rows;
  bool escapes = true;  // attaining_index >= n - 1 for every row
};

/// Norming index of c1 L1 + c2 L2 across truncation lengths.
inline ScanReport span_peaking_scan(double c1, double c2, const std::vector<std::int64_t>& n_list) {
  if (c1 == 0.0 && c2 == 0.0) throw InvalidArgument("coefficients (c1, c2) must not both be zero");
  ScanReport rep;
  for (std::int64_t n : n_list) {
    const L1Truncation t = build_l1_counterexample(n);
    const Eigen::VectorXd L = c1 * t.L1 + c2 * t.L2;
    ScanRow row{n, c1, c2, norming_analysis(L, n)};
    if (row.analysis.attaining_index < n - 1) rep.escapes = false;
    rep.rows.push_back(row);
  }
  return rep;
}

}  // namespace banachrep::nonreflexive
