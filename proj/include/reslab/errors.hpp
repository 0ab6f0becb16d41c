#pragma once

#include <stdexcept>
#include <string>

namespace reslab {

/// Invalid input: violated precondition, bad parameter, malformed file.
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A numerical procedure could not certify its result to the requested accuracy.
class AccuracyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Shifted solve requested at (or numerically at) a point of the spectrum.
class SingularityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Input does not satisfy a structural hypothesis required by the operation.
class PreconditionError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// Requested tubular neighbourhood is wider than the boundary allows.
class TubeTooWideError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// Constructive search ran out of room before closing its bracket.
class SearchDepthError : public AccuracyError {
 public:
  using AccuracyError::AccuracyError;
};

}  // namespace reslab
