#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace nsbf {

/// Root of the library's exception hierarchy. The CLI maps each subclass
/// family to an exit code.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Configuration and input errors (CLI exit code 2).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

class ParseError : public InvalidArgument {
 public:
  ParseError(std::size_t offset, std::string expected, const std::string& detail)
      : InvalidArgument("syntax error at offset " + std::to_string(offset) + ": expected " +
                        expected + (detail.empty() ? std::string() : " (" + detail + ")")),
        offset_(offset),
        expected_(std::move(expected)) {}

  std::size_t offset() const noexcept { return offset_; }
  const std::string& expected() const noexcept { return expected_; }

 private:
  std::size_t offset_;
  std::string expected_;
};

class UnknownIdentifier : public InvalidArgument {
 public:
  UnknownIdentifier(std::size_t offset, const std::string& name)
      : InvalidArgument("unknown identifier '" + name + "' at offset " + std::to_string(offset)),
        offset_(offset),
        name_(name) {}

  std::size_t offset() const noexcept { return offset_; }
  const std::string& name() const noexcept { return name_; }

 private:
  std::size_t offset_;
  std::string name_;
};

class LimitError : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

// Evaluation errors (CLI exit code 3).
class EvaluationError : public Error {
 public:
  using Error::Error;
};

class DomainError : public EvaluationError {
 public:
  using EvaluationError::EvaluationError;
};

class ConvergenceError : public EvaluationError {
 public:
  using EvaluationError::EvaluationError;
};

/// A solution used as a divisor came too close to zero on the grid.
class NearZeroError : public EvaluationError {
 public:
  NearZeroError(const std::string& what, double min_abs, double node)
      : EvaluationError(what), min_abs_(min_abs), node_(node) {}

  double min_abs() const noexcept { return min_abs_; }
  double node() const noexcept { return node_; }

 private:
  double min_abs_;
  double node_;
};

class ZeroOmegaError : public EvaluationError {
 public:
  ZeroOmegaError() : EvaluationError("omega must be nonzero for this representation") {}
};

class MissingPrerequisite : public EvaluationError {
 public:
  using EvaluationError::EvaluationError;
};

// Spectral errors (CLI exit code 4).
class SpectralError : public Error {
 public:
  using Error::Error;
};

class RangeExhausted : public SpectralError {
 public:
  using SpectralError::SpectralError;
};

class UnsupportedInterval : public SpectralError {
 public:
  using SpectralError::SpectralError;
};

// Reference-oracle errors (CLI exit code 5).
class OracleError : public Error {
 public:
  using Error::Error;
};

}  // namespace nsbf
