#pragma once

#include <cstdio>
#include <stdexcept>
#include <string>

namespace repstab {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input: bad group spec, shape mismatch, unparsable file.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// A numerical precondition of an algorithm does not hold. Carries the
/// measured quantity and the limit it was compared against so callers can
/// report them.
class PreconditionError : public Error {
 public:
  PreconditionError(const std::string& what, double measured, double limit)
      : Error(what + " (measured " + format(measured) + ", limit " + format(limit) + ")"),
        measured_(measured),
        limit_(limit) {}

  double measured() const noexcept { return measured_; }
  double limit() const noexcept { return limit_; }

 private:
  static std::string format(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
  }

  double measured_;
  double limit_;
};

/// An iterative kernel failed to converge within its iteration cap.
class ConvergenceError : public Error {
 public:
  using Error::Error;
};

}  // namespace repstab
