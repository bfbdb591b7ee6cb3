#pragma once

#include <stdexcept>
#include <string>

namespace riskweave {

/// Broad failure category; the CLI maps these onto exit codes.
enum class ErrorKind {
  validation,   // malformed model, judgments, or arguments
  computation,  // numerical procedure did not produce a result
  io,           // filesystem or network failure
  not_found,    // unknown model, session, or context
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

class ValidationError : public Error {
 public:
  explicit ValidationError(const std::string& message)
      : Error(ErrorKind::validation, message) {}
};

/// Schema violation in a document; `path` is a JSON pointer to the offending node.
class SchemaError : public ValidationError {
 public:
  SchemaError(std::string path, const std::string& message)
      : ValidationError(path + ": " + message), path_(std::move(path)) {}

  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

class ComputationError : public Error {
 public:
  explicit ComputationError(const std::string& message)
      : Error(ErrorKind::computation, message) {}
};

class IoError : public Error {
 public:
  explicit IoError(const std::string& message) : Error(ErrorKind::io, message) {}
};

class NotFoundError : public Error {
 public:
  explicit NotFoundError(const std::string& message)
      : Error(ErrorKind::not_found, message) {}
};

}  // namespace riskweave
