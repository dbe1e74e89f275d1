#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace contactq {

// Root of every error raised by the library. Numeric/domain failures derive
// from DomainError so the CLI can map them to exit code 2.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DomainError : public Error {
 public:
  using Error::Error;
};

// ---- expression parsing -------------------------------------------------

class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t position)
      : Error(what + " at position " + std::to_string(position)), position_(position) {}
  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

class SyntaxError : public ParseError {
 public:
  using ParseError::ParseError;
};
class NegativeExponent : public ParseError {
 public:
  using ParseError::ParseError;
};
class DivisionByNonLiteral : public ParseError {
 public:
  using ParseError::ParseError;
};

// Malformed configuration or serialized input.
class InputError : public Error {
 public:
  using Error::Error;
};

// ---- symbolic core ------------------------------------------------------

class UnknownVariable : public Error {
 public:
  using Error::Error;
};
class RegistryMismatch : public Error {
 public:
  using Error::Error;
};
class ForeignVariable : public Error {
 public:
  using Error::Error;
};

// ---- contact core -------------------------------------------------------

class NotContact : public DomainError {
 public:
  using DomainError::DomainError;
};
class SingularForm : public DomainError {
 public:
  using DomainError::DomainError;
};

// ---- characteristics ----------------------------------------------------

class NonFiniteState : public DomainError {
 public:
  using DomainError::DomainError;
};
class EvaluatorFailure : public DomainError {
 public:
  using DomainError::DomainError;
};
class NoRoot : public DomainError {
 public:
  using DomainError::DomainError;
};
class TangentialCharacteristic : public DomainError {
 public:
  using DomainError::DomainError;
};
class NonZeroArea : public DomainError {
 public:
  using DomainError::DomainError;
};

// ---- thermodynamics -----------------------------------------------------

class NonPositiveInput : public DomainError {
 public:
  using DomainError::DomainError;
};
class ConjugatePair : public DomainError {
 public:
  using DomainError::DomainError;
};
class NonInvertibleChart : public DomainError {
 public:
  using DomainError::DomainError;
};

// ---- quantization -------------------------------------------------------

class LaurentObstruction : public DomainError {
 public:
  using DomainError::DomainError;
};
class DependsOnU : public DomainError {
 public:
  using DomainError::DomainError;
};
class NotOnShell : public DomainError {
 public:
  using DomainError::DomainError;
};
class NonHermitianDiscretization : public DomainError {
 public:
  using DomainError::DomainError;
};

// ---- spheres ------------------------------------------------------------

class StructureMismatch : public DomainError {
 public:
  using DomainError::DomainError;
};
class CutoffTooSmall : public DomainError {
 public:
  using DomainError::DomainError;
};

}  // namespace contactq
