#pragma once

#include <stdexcept>
#include <string>

namespace glueprint {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operands of incompatible rank or size.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// An operation was called outside its domain (e.g. a degenerate form where
/// a definite one is required).
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// Input data violates a structural invariant. `path` names the offending
/// field, e.g. "gluing[3].matrix".
class ValidationError : public Error {
 public:
  ValidationError(std::string path, const std::string& message)
      : Error(path.empty() ? message : path + ": " + message), path_(std::move(path)) {}

  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

class InvalidSlopeError : public Error {
 public:
  using Error::Error;
};

class UnsupportedError : public Error {
 public:
  using Error::Error;
};

/// A closed formula was applied outside the range where it holds.
class FormulaInapplicableError : public Error {
 public:
  using Error::Error;
};

/// A sweep would exceed the configured number of cells.
class ResourceCapError : public Error {
 public:
  ResourceCapError(unsigned long long cap, unsigned long long requested)
      : Error("sweep needs " + std::to_string(requested) + " cells, cap is " + std::to_string(cap)),
        cap_(cap),
        requested_(requested) {}

  unsigned long long cap() const { return cap_; }
  unsigned long long requested() const { return requested_; }

 private:
  unsigned long long cap_;
  unsigned long long requested_;
};

}  // namespace glueprint
