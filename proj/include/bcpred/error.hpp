#pragma once

#include <map>
#include <stdexcept>
#include <string>

namespace bcpred {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Input file could not be opened.
class FileError : public Error {
 public:
  explicit FileError(const std::string& path)
      : Error("cannot open file '" + path + "'"), path_(path) {}
  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

/// Malformed CSV, artifact, or report content.
class ParseError : public Error {
 public:
  using Error::Error;
};

/// A documented precondition on an argument was violated.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// Gradient descent kept increasing the cost after the maximum number of
/// learning-rate halvings.
class DivergenceError : public Error {
 public:
  using Error::Error;
};

/// Request-level validation failure with per-field messages.
class ValidationError : public Error {
 public:
  explicit ValidationError(std::map<std::string, std::string> fields);
  const std::map<std::string, std::string>& fields() const noexcept {
    return fields_;
  }

 private:
  std::map<std::string, std::string> fields_;
};

}  // namespace bcpred
