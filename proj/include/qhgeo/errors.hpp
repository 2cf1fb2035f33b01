#pragma once

#include <stdexcept>
#include <string>

namespace qhgeo {

/// Base of every error the toolkit raises.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A point was passed to an operation that requires it to lie in the domain.
class MembershipError : public Error {
 public:
  using Error::Error;
};

/// A domain, puncture set or arc violates its construction invariants.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// Rejection sampling could not place the requested number of points.
class SamplerExhausted : public Error {
 public:
  using Error::Error;
};

/// Endpoints lie in different components of a discretization.
class DisconnectedError : public Error {
 public:
  using Error::Error;
};

/// A precondition of a checker does not hold (e.g. unvalidated punctures).
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// Malformed input file; the message carries line and column.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line, std::size_t column)
      : Error(what + " (line " + std::to_string(line) + ", column " +
              std::to_string(column) + ")"),
        line_(line),
        column_(column) {}

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

}  // namespace qhgeo
