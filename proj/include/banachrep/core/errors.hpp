#pragma once

#include <stdexcept>
#include <string>

namespace banachrep {

/// Root of every error raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class DimensionMismatch : public Error {
public:
  using Error::Error;
};

/// Exponent outside the reflexive range 1 < p < inf.
class InvalidExponent : public Error {
public:
  using Error::Error;
};

class InvalidArgument : public Error {
public:
  using Error::Error;
};

/// Constraint system A f = y has no solution.
class Infeasible : public Error {
public:
  using Error::Error;
};

class NonConvergence : public Error {
public:
  using Error::Error;
};

class NullSpaceTooLarge : public Error {
public:
  using Error::Error;
};

class PreconditionFailed : public Error {
public:
  using Error::Error;
};

class EvaluationError : public Error {
public:
  using Error::Error;
};

class BracketNotFound : public Error {
public:
  using Error::Error;
};

class ImagTooLarge : public Error {
public:
  using Error::Error;
};

}  // namespace banachrep

#include <cstdio>

namespace banachrep::detail {

/// Compact %g rendering for error messages.
inline std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

}  // namespace banachrep::detail
