#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace rhc {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed or unusable input: bad geometry, bad expressions, under-resolved data.
class InputError : public Error {
 public:
  using Error::Error;
};

// A mathematical hypothesis of a construction is violated by the data.
class HypothesisError : public Error {
 public:
  using Error::Error;
};

// The discretized operator cannot deliver a trustworthy answer.
class NumericalError : public Error {
 public:
  using Error::Error;
};

class InvalidArgumentError : public InputError {
 public:
  using InputError::InputError;
};
class OverlapError : public InputError {
 public:
  using InputError::InputError;
};
class OrientationError : public InputError {
 public:
  using InputError::InputError;
};
class SingularInversionError : public InputError {
 public:
  using InputError::InputError;
};
class AlignmentError : public InputError {
 public:
  using InputError::InputError;
};
class TooCloseToContourError : public InputError {
 public:
  using InputError::InputError;
};
class WindingAmbiguityError : public InputError {
 public:
  using InputError::InputError;
};
class CirclePackingError : public InputError {
 public:
  using InputError::InputError;
};
class RadiusConflictError : public InputError {
 public:
  using InputError::InputError;
};

class ParseError : public InputError {
 public:
  ParseError(const std::string& what, std::size_t position)
      : InputError(what + " at position " + std::to_string(position)), position_(position) {}
  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

class EvalError : public InputError {
 public:
  using InputError::InputError;
};

class SingularJumpError : public HypothesisError {
 public:
  using HypothesisError::HypothesisError;
};
class NotInversionInvariantContourError : public HypothesisError {
 public:
  using HypothesisError::HypothesisError;
};
class ReflectionTooLargeError : public HypothesisError {
 public:
  using HypothesisError::HypothesisError;
};
class HypothesisViolationError : public HypothesisError {
 public:
  using HypothesisError::HypothesisError;
};
class NonConstantCError : public HypothesisError {
 public:
  NonConstantCError(const std::string& what, double deviation)
      : HypothesisError(what), deviation_(deviation) {}
  double deviation() const { return deviation_; }

 private:
  double deviation_;
};
class NonPositiveCError : public HypothesisError {
 public:
  using HypothesisError::HypothesisError;
};

class NearSingularOperatorError : public NumericalError {
 public:
  NearSingularOperatorError(const std::string& what, double smallest_singular_value)
      : NumericalError(what), smallest_singular_value_(smallest_singular_value) {}
  double smallest_singular_value() const { return smallest_singular_value_; }

 private:
  double smallest_singular_value_;
};
class RankAmbiguityError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};
class DegenerateSolitonSystemError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

}  // namespace rhc
