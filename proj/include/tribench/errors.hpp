#pragma once

#include <stdexcept>
#include <string>

namespace tribench {

/// Base class for everything this library throws on purpose.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Malformed or inconsistent input data (files, CLI arguments, empty lists).
struct FormatError : Error {
  using Error::Error;
};

struct EmptyInput : FormatError {
  using FormatError::FormatError;
};

/// Geometric failure family. Anything derived from this aborts a
/// reconstruction with exit code 3 at the CLI level.
struct GeometryError : Error {
  using Error::Error;
};

struct CheiralityViolation : GeometryError {
  using GeometryError::GeometryError;
};

struct DegenerateGeometry : GeometryError {
  using GeometryError::GeometryError;
};

struct EpipoleAtPoint : GeometryError {
  using GeometryError::GeometryError;
};

struct DegenerateConfiguration : GeometryError {
  using GeometryError::GeometryError;
};

struct AmbiguousCheirality : GeometryError {
  using GeometryError::GeometryError;
};

struct DisconnectedGraph : GeometryError {
  using GeometryError::GeometryError;
};

struct CollinearDegeneracy : GeometryError {
  using GeometryError::GeometryError;
};

struct DegenerateAngle : GeometryError {
  using GeometryError::GeometryError;
};

/// File-system trouble: missing paths, unwritable output.
struct IoError : Error {
  using Error::Error;
};

}  // namespace tribench
