#pragma once

#include <stdexcept>
#include <string>

namespace prism {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An exact division failed. `witness()` holds the serialized remainder.
class NotDivisible : public Error {
 public:
  NotDivisible(const std::string& what, std::string witness)
      : Error(what), witness_(std::move(witness)) {}
  const std::string& witness() const noexcept { return witness_; }

 private:
  std::string witness_;
};

/// A computed identity that must hold did not. Carries a serialized
/// counterexample; the CLI maps these to a dedicated exit code.
class Defect : public Error {
 public:
  Defect(const std::string& what, std::string witness = {})
      : Error(what), witness_(std::move(witness)) {}
  const std::string& witness() const noexcept { return witness_; }

 private:
  std::string witness_;
};

class NonIntegralCoefficient : public Defect {
 public:
  using Defect::Defect;
};

class NonCommuting : public Defect {
 public:
  using Defect::Defect;
};

class Mismatch : public Defect {
 public:
  using Defect::Defect;
};

class DepthExceeded : public Error {
 public:
  using Error::Error;
};

class PrecisionLoss : public Error {
 public:
  using Error::Error;
};

class DegreeOverflow : public Error {
 public:
  using Error::Error;
};

class WindowOverflow : public Error {
 public:
  using Error::Error;
};

class MixedRings : public Error {
 public:
  using Error::Error;
};

class RootDepthUnsupported : public Error {
 public:
  using Error::Error;
};

class NotAComplex : public Error {
 public:
  using Error::Error;
};

class Unstable : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(std::size_t line, std::size_t col, std::string expected)
      : Error("parse error at " + std::to_string(line) + ":" + std::to_string(col) +
              ": expected " + expected),
        line_(line),
        col_(col),
        expected_(std::move(expected)) {}

  std::size_t line() const noexcept { return line_; }
  std::size_t col() const noexcept { return col_; }
  const std::string& expected() const noexcept { return expected_; }

 private:
  std::size_t line_;
  std::size_t col_;
  std::string expected_;
};

}  // namespace prism
