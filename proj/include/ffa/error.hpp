#pragma once

#include <stdexcept>
#include <string>

namespace ffa {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A value lies outside its feature domain, or a point has the wrong arity.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Seed handed to an extraction routine does not satisfy the predicate.
class InvalidSeedError : public Error {
 public:
  using Error::Error;
};

/// Empty set offered as a blocking clause.
class DegenerateClauseError : public Error {
 public:
  using Error::Error;
};

/// Attribution over an empty explanation family, or KL over a zero vector.
class UndefinedAttributionError : public Error {
 public:
  using Error::Error;
};

class DimensionMismatchError : public Error {
 public:
  using Error::Error;
};

/// A configured size cap (feature space, graph order, m <= 64) was exceeded.
class CapExceededError : public Error {
 public:
  using Error::Error;
};

class PreconditionError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

/// Raised when a post-condition check fails; maps to CLI exit code 2.
class InvariantError : public Error {
 public:
  using Error::Error;
};

}  // namespace ffa
