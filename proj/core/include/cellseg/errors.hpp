#pragma once

#include <stdexcept>
#include <string>

namespace cellseg {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An argument violates an operation's precondition (wrong channel count,
/// empty region, unknown label, ...).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// Two inputs that must share a shape do not.
class DimensionMismatch : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

/// A pipeline stage failed. `stage()` names the step, `what()` includes it.
class StageError : public Error {
 public:
  StageError(std::string stage, const std::string& detail)
      : Error("stage '" + stage + "' failed: " + detail), stage_(std::move(stage)) {}

  const std::string& stage() const noexcept { return stage_; }

 private:
  std::string stage_;
};

}  // namespace cellseg
