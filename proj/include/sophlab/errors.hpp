#pragma once

#include <stdexcept>
#include <string>

namespace sophlab {

// Base class for everything this library throws on purpose.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Malformed user input: bad bit strings, unparsable model files, invalid
// budget combinations. CLI maps these to exit code 2.
struct BadInputError : Error {
  using Error::Error;
};

// A query referred to a string with no entry in the consulted table.
struct UnknownStringError : BadInputError {
  explicit UnknownStringError(const std::string& x)
      : BadInputError("string not present in table: \"" + x + "\""),
        missing(x) {}
  std::string missing;
};

// Domain-level failures of the statistics and model operations.
// CLI maps these to exit code 4.
struct DomainError : Error {
  using Error::Error;
};

struct NotInBallError : DomainError {
  using DomainError::DomainError;
};

struct NoPreimageError : DomainError {
  using DomainError::DomainError;
};

struct RadiusTooLargeError : DomainError {
  using DomainError::DomainError;
};

struct NoCoverageError : DomainError {
  using DomainError::DomainError;
};

// Enumeration refused to start because the projected pair count exceeds the
// configured safety cap.
struct ResourceExceededError : Error {
  using Error::Error;
};

// Snapshot I/O.
struct IoError : Error {
  using Error::Error;
};

struct CorruptSnapshotError : Error {
  using Error::Error;
};

struct VersionMismatchError : Error {
  using Error::Error;
};

// CLI: a query demanded a snapshot that has not been built.
struct MissingSnapshotError : Error {
  using Error::Error;
};

}  // namespace sophlab
