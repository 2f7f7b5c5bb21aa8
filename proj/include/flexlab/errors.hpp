#pragma once

#include <stdexcept>
#include <string>

namespace flexlab {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Caller handed in something the operation is not defined for (kind mismatch, bad sizes).
struct UsageError : Error {
  using Error::Error;
};

struct DomainError : Error {
  using Error::Error;
};

// rho_S(-1), the stereographic image of the north pole.
struct InfinityError : DomainError {
  using DomainError::DomainError;
};

struct AmbiguityError : Error {
  using Error::Error;
};

struct NoIntersectionError : Error {
  using Error::Error;
};

struct InfiniteIntersectionError : Error {
  using Error::Error;
};

struct InvalidFramework : Error {
  using Error::Error;
};

struct PreconditionError : Error {
  using Error::Error;
};

struct GenerationError : Error {
  using Error::Error;
};

// An exact computation that must succeed did not; always an implementation bug.
struct IdentityViolation : Error {
  using Error::Error;
};

struct ParseError : Error {
  using Error::Error;
};

}  // namespace flexlab
