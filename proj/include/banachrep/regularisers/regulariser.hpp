#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "banachrep/core/errors.hpp"
#include "banachrep/core/pnorm_space.hpp"
#include "banachrep/regularisers/expression.hpp"

namespace banachrep {

/// Nondecreasing h: [0, inf) -> R composed with the norm in Omega = h(||f||).
class MonotoneFn {
public:
  enum class Kind { identity, square, exp_minus_one, table };
  enum class Interp { linear, step };

  static MonotoneFn identity() { return MonotoneFn(Kind::identity); }
  static MonotoneFn square() { return MonotoneFn(Kind::square); }
  static MonotoneFn exp_minus_one() { return MonotoneFn(Kind::exp_minus_one); }

  /// Piecewise table through (radii[k], values[k]); constant beyond both ends.
  /// With Interp::step the value jumps at each radius (right-continuous).
  static MonotoneFn table(std::vector<double> radii, std::vector<double> values, Interp interp = Interp::linear) {
    if (radii.empty() || radii.size() != values.size()) {
      throw InvalidArgument("monotone table needs equally many radii and values, at least one");
    }
    for (std::size_t k = 1; k < radii.size(); ++k) {
      if (!(radii[k] > radii[k - 1])) throw InvalidArgument("monotone table radii must be strictly increasing");
    }
    MonotoneFn h(Kind::table);
    h.radii_ = std::move(radii);
    h.values_ = std::move(values);
    h.interp_ = interp;
    if (!h.nondecreasing_on_grid()) throw InvalidArgument("monotone table is not nondecreasing");
    return h;
  }

  /// Parses "identity" | "square" | "exp-minus-one".
  static std::optional<MonotoneFn> from_name(const std::string& name) {
    if (name == "identity") return identity();
    if (name == "square") return square();
    if (name == "exp-minus-one") return exp_minus_one();
    return std::nullopt;
  }

  double operator()(double r) const {
    switch (kind_) {
      case Kind::identity: return r;
      case Kind::square: return r * r;
      case Kind::exp_minus_one: return std::expm1(r);
      case Kind::table: return eval_table(r);
    }
    return r;
  }

  Kind kind() const { return kind_; }

  std::string name() const {
    switch (kind_) {
      case Kind::identity: return "identity";
      case Kind::square: return "square";
      case Kind::exp_minus_one: return "exp-minus-one";
      case Kind::table: return interp_ == Interp::step ? "step-table" : "table";
    }
    return "?";
  }

  bool strictly_increasing() const {
    if (kind_ != Kind::table) return true;
    // flat beyond the last radius
    return false;
  }

  /// Samples h on a grid covering [0, 2 * last breakpoint] and checks monotonicity.
  bool nondecreasing_on_grid(int samples = 2001) const {
    const double top = kind_ == Kind::table ? 2.0 * std::max(1.0, radii_.back()) : 10.0;
    double prev = (*this)(0.0);
    for (int k = 1; k < samples; ++k) {
      const double v = (*this)(top * k / (samples - 1));
      if (v < prev) return false;
      prev = v;
    }
    for (std::size_t k = 1; k < values_.size(); ++k)
      if (values_[k] < values_[k - 1]) return false;
    return true;
  }

private:
  explicit MonotoneFn(Kind k) : kind_(k) {}

  double eval_table(double r) const {
    if (r < radii_.front()) return values_.front();
    if (r >= radii_.back()) return values_.back();
    const auto it = std::upper_bound(radii_.begin(), radii_.end(), r);
    const auto k = static_cast<std::size_t>(it - radii_.begin());
    if (interp_ == Interp::step) return values_[k - 1];
    const double t = (r - radii_[k - 1]) / (radii_[k] - radii_[k - 1]);
    return values_[k - 1] + t * (values_[k] - values_[k - 1]);
  }

  Kind kind_;
  std::vector<double> radii_;
  std::vector<double> values_;
  Interp interp_ = Interp::linear;
};

/// A regulariser Omega: B -> R together with what is known about it.
struct RegulariserSpec {
  std::string source;
  std::function<double(const PNormSpace&, const Element<Real>&)> compiled;
  bool claims_admissible = false;
  /// Omega = h(||f||) with h strictly increasing; required for uniqueness arguments.
  bool strictly_increasing = false;
  std::optional<MonotoneFn> profile;  // set when built by make_admissible
  expr::NodePtr tree;                 // set when parsed

  double operator()(const PNormSpace& space, const Element<Real>& f) const { return compiled(space, f); }
};

/// Omega(f) = h(||f||).
inline RegulariserSpec make_admissible(const MonotoneFn& h) {
  if (!h.nondecreasing_on_grid()) throw InvalidArgument("h must be nondecreasing");
  RegulariserSpec spec;
  spec.source = "h:" + h.name();
  spec.compiled = [h](const PNormSpace& space, const Element<Real>& f) { return h(norm(space, f)); };
  spec.claims_admissible = true;
  spec.strictly_increasing = h.strictly_increasing();
  spec.profile = h;
  return spec;
}

/// Omega does not capture the space; it is evaluated against the one passed at call time.
inline RegulariserSpec make_admissible(const MonotoneFn& h, const PNormSpace&) { return make_admissible(h); }

inline RegulariserSpec parse_regulariser(const std::string& text) {
  RegulariserSpec spec;
  spec.source = text;
  spec.tree = expr::parse(text);
  const expr::NodePtr tree = spec.tree;
  spec.compiled = [tree](const PNormSpace& space, const Element<Real>& f) { return expr::evaluate(tree, space, f); };
  const expr::Monotonicity m = expr::analyze(tree);
  spec.claims_admissible = m.trend == expr::Trend::constant || m.trend == expr::Trend::increasing;
  spec.strictly_increasing = m.trend == expr::Trend::increasing && m.strict;
  return spec;
}

/// Named profile ("identity", "square", "exp-minus-one") or expression text.
inline RegulariserSpec regulariser_from_text(const std::string& text) {
  if (auto h = MonotoneFn::from_name(text)) return make_admissible(*h);
  return parse_regulariser(text);
}

}  // namespace banachrep
