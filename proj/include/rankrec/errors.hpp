#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace rankrec {

/// Invalid argument: rank out of range, length mismatch, bad shape.
class ArgumentError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A computation left the numeric domain (ln of non-positive, division by
/// zero, non-finite input or result).
class NumericDomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// DSL or system-file syntax problem. Line and column are 1-based.
class ParseError : public std::runtime_error {
 public:
  enum class Kind { Syntax, UnknownIdentifier, Arity, NonLiteralRank, NonConstantExponent, Schema };

  ParseError(Kind kind, std::string message, int line = 0, int column = 0);

  Kind kind() const noexcept { return kind_; }
  int line() const noexcept { return line_; }
  int column() const noexcept { return column_; }

 private:
  Kind kind_;
  int line_;
  int column_;
};

/// A file could not be read or written.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The system is not certified contractive and the caller did not force it.
class CertificationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A stated precondition of an operation does not hold.
class PreconditionError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Fixed-point iteration did not reach the tolerance. Carries the per-iteration
/// sup-norm step sizes.
class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(std::string message, std::vector<double> residual_trace)
      : std::runtime_error(std::move(message)), trace_(std::move(residual_trace)) {}

  const std::vector<double>& residual_trace() const noexcept { return trace_; }

 private:
  std::vector<double> trace_;
};

/// Numeric failure during trajectory iteration at step `step`.
class SimulationError : public NumericDomainError {
 public:
  SimulationError(std::string message, std::size_t step, std::vector<double> partial)
      : NumericDomainError(std::move(message)), step_(step), partial_(std::move(partial)) {}

  std::size_t step() const noexcept { return step_; }
  const std::vector<double>& partial() const noexcept { return partial_; }

 private:
  std::size_t step_;
  std::vector<double> partial_;
};

}  // namespace rankrec
