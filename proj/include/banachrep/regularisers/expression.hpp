#pragma once

// Regulariser expression language.
//
//   expr   := term (("+"|"-") term)*
//   term   := factor (("*"|"/") factor)*
//   factor := atom ("^" factor)?
//   atom   := NUMBER | "norm" | "coord" "(" INT ")" | FUNC "(" expr ")"
//           | "(" expr ")" | "-" atom
//   FUNC   := "exp" | "abs" | "sqrt" | "max0"
//
// `norm` is the p-norm of the evaluation point, `coord(i)` its i-th (0-based)
// coordinate and `max0(x)` = max(x, 0).

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <memory>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <variant>

#include "banachrep/core/errors.hpp"
#include "banachrep/core/pnorm_space.hpp"

namespace banachrep::expr {

class ParseError : public Error {
public:
  ParseError(std::size_t position, std::set<std::string> expected, const std::string& found)
      : Error(make_message(position, expected, found)), position_(position), expected_(std::move(expected)) {}

  std::size_t position() const { return position_; }
  const std::set<std::string>& expected() const { return expected_; }

private:
  static std::string make_message(std::size_t pos, const std::set<std::string>& expected, const std::string& found) {
    std::string msg = "parse error at position " + std::to_string(pos) + ": expected ";
    if (expected.size() > 1) msg += "one of ";
    bool first = true;
    for (const auto& e : expected) {
      if (!first) msg += ", ";
      msg += "'" + e + "'";
      first = false;
    }
    msg += ", found " + (found.empty() ? std::string("end of input") : "'" + found + "'");
    return msg;
  }

  std::size_t position_;
  std::set<std::string> expected_;
};

enum class Func { exp, abs, sqrt, max0 };
enum class BinOp { add, sub, mul, div, pow };

struct Node;
using NodePtr = std::shared_ptr<const Node>;

struct Number {
  double value;
};
struct NormRef {};
struct Coord {
  std::size_t index;
};
struct Call {
  Func func;
  NodePtr arg;
};
struct Negate {
  NodePtr arg;
};
struct Binary {
  BinOp op;
  NodePtr lhs;
  NodePtr rhs;
};

struct Node {
  std::variant<Number, NormRef, Coord, Call, Negate, Binary> v;
};

inline const char* func_name(Func f) {
  switch (f) {
    case Func::exp: return "exp";
    case Func::abs: return "abs";
    case Func::sqrt: return "sqrt";
    case Func::max0: return "max0";
  }
  return "?";
}

inline char op_char(BinOp op) {
  switch (op) {
    case BinOp::add: return '+';
    case BinOp::sub: return '-';
    case BinOp::mul: return '*';
    case BinOp::div: return '/';
    case BinOp::pow: return '^';
  }
  return '?';
}

namespace detail {

template <class T>
NodePtr make(T t) {
  return std::make_shared<const Node>(Node{std::move(t)});
}

class Parser {
public:
  explicit Parser(std::string_view text) : text_(text) {}

  NodePtr parse() {
    NodePtr e = expr();
    skip_ws();
    if (pos_ != text_.size()) fail({"+", "-", "*", "/", "^", "end of input"});
    return e;
  }

private:
  NodePtr expr() {
    NodePtr lhs = term();
    while (true) {
      skip_ws();
      if (accept('+')) {
        lhs = make(Binary{BinOp::add, lhs, term()});
      } else if (accept('-')) {
        lhs = make(Binary{BinOp::sub, lhs, term()});
      } else {
        return lhs;
      }
    }
  }

  NodePtr term() {
    NodePtr lhs = factor();
    while (true) {
      skip_ws();
      if (accept('*')) {
        lhs = make(Binary{BinOp::mul, lhs, factor()});
      } else if (accept('/')) {
        lhs = make(Binary{BinOp::div, lhs, factor()});
      } else {
        return lhs;
      }
    }
  }

  NodePtr factor() {
    NodePtr base = atom();
    skip_ws();
    if (accept('^')) return make(Binary{BinOp::pow, base, factor()});
    return base;
  }

  NodePtr atom() {
    skip_ws();
    if (pos_ >= text_.size()) fail(atom_start());
    const char ch = text_[pos_];
    if (std::isdigit(static_cast<unsigned char>(ch)) || ch == '.') return number();
    if (accept('-')) return make(Negate{atom()});
    if (accept('(')) {
      NodePtr e = expr();
      expect(')');
      return e;
    }
    if (std::isalpha(static_cast<unsigned char>(ch))) {
      const std::size_t start = pos_;
      const std::string id = identifier();
      if (id == "norm") return make(NormRef{});
      if (id == "coord") {
        expect('(');
        skip_ws();
        const std::size_t istart = pos_;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
        if (istart == pos_) fail({"INT"});
        const std::size_t idx = std::stoul(std::string(text_.substr(istart, pos_ - istart)));
        expect(')');
        return make(Coord{idx});
      }
      for (Func f : {Func::exp, Func::abs, Func::sqrt, Func::max0}) {
        if (id == func_name(f)) {
          expect('(');
          NodePtr arg = expr();
          expect(')');
          return make(Call{f, arg});
        }
      }
      pos_ = start;
      fail(atom_start());
    }
    fail(atom_start());
  }

  NodePtr number() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    if (pos_ < text_.size() && text_[pos_] == '.') {
      ++pos_;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }
    if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
      std::size_t save = pos_++;
      if (pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-')) ++pos_;
      if (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      } else {
        pos_ = save;
      }
    }
    const std::string lit(text_.substr(start, pos_ - start));
    if (lit == ".") {
      pos_ = start;
      fail({"NUMBER"});
    }
    return make(Number{std::strtod(lit.c_str(), nullptr)});
  }

  std::string identifier() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) ++pos_;
    return std::string(text_.substr(start, pos_ - start));
  }

  static std::set<std::string> atom_start() {
    return {"NUMBER", "norm", "coord", "exp", "abs", "sqrt", "max0", "(", "-"};
  }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) fail({std::string(1, c)});
  }

  [[noreturn]] void fail(std::set<std::string> expected) {
    skip_ws();
    std::string found;
    if (pos_ < text_.size()) {
      std::size_t end = pos_ + 1;
      if (std::isalnum(static_cast<unsigned char>(text_[pos_]))) {
        while (end < text_.size() && std::isalnum(static_cast<unsigned char>(text_[end]))) ++end;
      }
      found = std::string(text_.substr(pos_, end - pos_));
    }
    throw ParseError(pos_, std::move(expected), found);
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace detail

inline NodePtr parse(std::string_view text) { return detail::Parser(text).parse(); }

/// Fully parenthesised rendering that parses back to the same tree.
inline std::string to_string(const NodePtr& n) {
  return std::visit(
      [](const auto& node) -> std::string {
        using T = std::decay_t<decltype(node)>;
        if constexpr (std::is_same_v<T, Number>) {
          char buf[40];
          std::snprintf(buf, sizeof buf, "%.17g", node.value);
          return buf;
        } else if constexpr (std::is_same_v<T, NormRef>) {
          return "norm";
        } else if constexpr (std::is_same_v<T, Coord>) {
          return "coord(" + std::to_string(node.index) + ")";
        } else if constexpr (std::is_same_v<T, Call>) {
          return std::string(func_name(node.func)) + "(" + to_string(node.arg) + ")";
        } else if constexpr (std::is_same_v<T, Negate>) {
          return "(-" + to_string(node.arg) + ")";
        } else {
          return "(" + to_string(node.lhs) + " " + op_char(node.op) + " " + to_string(node.rhs) + ")";
        }
      },
      n->v);
}

/// Evaluates the expression at f.  Out-of-range coordinates and non-finite
/// intermediate results raise EvaluationError.
inline double evaluate(const NodePtr& n, const PNormSpace& space, const Element<Real>& f) {
  const double out = std::visit(
      [&](const auto& node) -> double {
        using T = std::decay_t<decltype(node)>;
        if constexpr (std::is_same_v<T, Number>) {
          return node.value;
        } else if constexpr (std::is_same_v<T, NormRef>) {
          return norm(space, f);
        } else if constexpr (std::is_same_v<T, Coord>) {
          if (node.index >= static_cast<std::size_t>(f.size())) {
            throw EvaluationError("coord(" + std::to_string(node.index) + ") out of range for dimension " +
                                  std::to_string(f.size()));
          }
          return f.coords[static_cast<Eigen::Index>(node.index)];
        } else if constexpr (std::is_same_v<T, Call>) {
          const double a = evaluate(node.arg, space, f);
          switch (node.func) {
            case Func::exp: return std::exp(a);
            case Func::abs: return std::abs(a);
            case Func::sqrt: return std::sqrt(a);
            case Func::max0: return a > 0.0 ? a : 0.0;
          }
          return a;
        } else if constexpr (std::is_same_v<T, Negate>) {
          return -evaluate(node.arg, space, f);
        } else {
          const double a = evaluate(node.lhs, space, f);
          const double b = evaluate(node.rhs, space, f);
          switch (node.op) {
            case BinOp::add: return a + b;
            case BinOp::sub: return a - b;
            case BinOp::mul: return a * b;
            case BinOp::div: return a / b;
            case BinOp::pow: return std::pow(a, b);
          }
          return a;
        }
      },
      n->v);
  if (std::isnan(out)) throw EvaluationError("expression evaluated to NaN");
  return out;
}

// ---------------------------------------------------------------------------
// Structural monotonicity in `norm`.  Sound but incomplete: anything not
// recognised is reported as unknown.

enum class Trend { constant, increasing, decreasing, unknown };

struct Monotonicity {
  Trend trend = Trend::unknown;
  bool strict = false;      // strictly monotone on [0, inf)
  bool nonnegative = false; // value >= 0 for every norm >= 0
  double value = 0.0;       // meaningful when trend == constant
};

namespace detail {

inline Monotonicity constant(double v) { return {Trend::constant, false, v >= 0.0, v}; }
inline Monotonicity unknown() { return {}; }

inline Monotonicity flip(const Monotonicity& m) {
  Monotonicity r = m;
  r.nonnegative = m.trend == Trend::constant && m.value <= 0.0;
  if (m.trend == Trend::constant) r.value = -m.value;
  if (m.trend == Trend::increasing) r.trend = Trend::decreasing;
  if (m.trend == Trend::decreasing) r.trend = Trend::increasing;
  return r;
}

inline Monotonicity add(const Monotonicity& a, const Monotonicity& b) {
  if (a.trend == Trend::constant && b.trend == Trend::constant) return constant(a.value + b.value);
  Monotonicity r;
  r.nonnegative = a.nonnegative && b.nonnegative;
  if (a.trend == Trend::constant || b.trend == Trend::constant) {
    const Monotonicity& v = a.trend == Trend::constant ? b : a;
    r.trend = v.trend;
    r.strict = v.strict;
  } else if (a.trend == b.trend && a.trend != Trend::unknown) {
    r.trend = a.trend;
    r.strict = a.strict || b.strict;
  }
  if (r.trend == Trend::unknown) r.strict = false;
  return r;
}

inline Monotonicity scale(const Monotonicity& v, double c) {
  if (c == 0.0) return constant(0.0);
  Monotonicity r = c > 0.0 ? v : flip(v);
  r.nonnegative = c > 0.0 ? v.nonnegative : false;
  return r;
}

}  // namespace detail

inline Monotonicity analyze(const NodePtr& n) {
  using namespace detail;
  return std::visit(
      [](const auto& node) -> Monotonicity {
        using T = std::decay_t<decltype(node)>;
        if constexpr (std::is_same_v<T, Number>) {
          return constant(node.value);
        } else if constexpr (std::is_same_v<T, NormRef>) {
          return {Trend::increasing, true, true, 0.0};
        } else if constexpr (std::is_same_v<T, Coord>) {
          return unknown();
        } else if constexpr (std::is_same_v<T, Negate>) {
          return flip(analyze(node.arg));
        } else if constexpr (std::is_same_v<T, Call>) {
          const Monotonicity a = analyze(node.arg);
          switch (node.func) {
            case Func::exp:
              if (a.trend == Trend::constant) return constant(std::exp(a.value));
              return {a.trend, a.strict && a.trend != Trend::unknown, true, 0.0};
            case Func::sqrt:
              if (a.trend == Trend::constant) return constant(std::sqrt(a.value));
              if (!a.nonnegative) return unknown();
              return {a.trend, a.strict, true, 0.0};
            case Func::abs:
              if (a.trend == Trend::constant) return constant(std::abs(a.value));
              if (!a.nonnegative) return unknown();
              return {a.trend, a.strict, true, 0.0};
            case Func::max0:
              if (a.trend == Trend::constant) return constant(std::max(a.value, 0.0));
              if (a.nonnegative) return a;
              if (a.trend == Trend::increasing || a.trend == Trend::decreasing) return {a.trend, false, true, 0.0};
              return unknown();
          }
          return unknown();
        } else {
          const Monotonicity a = analyze(node.lhs);
          const Monotonicity b = analyze(node.rhs);
          switch (node.op) {
            case BinOp::add: return add(a, b);
            case BinOp::sub: return add(a, flip(b));
            case BinOp::mul:
              if (a.trend == Trend::constant) return scale(b, a.value);
              if (b.trend == Trend::constant) return scale(a, b.value);
              if (a.trend == Trend::increasing && b.trend == Trend::increasing && a.nonnegative && b.nonnegative)
                return {Trend::increasing, a.strict && b.strict, true, 0.0};
              return unknown();
            case BinOp::div:
              if (b.trend == Trend::constant && b.value != 0.0) return scale(a, 1.0 / b.value);
              return unknown();
            case BinOp::pow:
              if (a.trend == Trend::constant && b.trend == Trend::constant) return constant(std::pow(a.value, b.value));
              if (b.trend == Trend::constant && a.nonnegative) {
                if (b.value > 0.0) return {a.trend, a.strict, true, 0.0};
                if (b.value == 0.0) return constant(1.0);
                return unknown();  // negative powers blow up at a zero base
              }
              if (a.trend == Trend::constant && a.value > 1.0 && b.trend != Trend::unknown)
                return {b.trend, b.strict, true, 0.0};
              return unknown();
          }
          return unknown();
        }
      },
      n->v);
}

}  // namespace banachrep::expr
