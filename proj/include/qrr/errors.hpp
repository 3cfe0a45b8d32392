#pragma once

#include <stdexcept>
#include <string>

namespace qrr {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NotInvertible : public Error {
 public:
  using Error::Error;
};

class DenominatorMismatch : public Error {
 public:
  using Error::Error;
};

class FractionalExponent : public Error {
 public:
  using Error::Error;
};

class WindowMiss : public Error {
 public:
  using Error::Error;
};

class PoleAtNegativeIndex : public Error {
 public:
  using Error::Error;
};

class NonTruncating : public Error {
 public:
  using Error::Error;
};

class NonSummable : public Error {
 public:
  using Error::Error;
};

class BadParameters : public Error {
 public:
  using Error::Error;
};

class NonIntegerExponent : public Error {
 public:
  using Error::Error;
};

class LeadingUnit : public Error {
 public:
  using Error::Error;
};

/// Parameter exponent left the representable range of a monomial.
class ParamOverflow : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

/// Catalog schema violation, carrying the line and field that failed.
class SchemaError : public Error {
 public:
  SchemaError(int line, std::string field, const std::string& msg)
      : Error("line " + std::to_string(line) + ", field '" + field + "': " + msg),
        line_(line),
        field_(std::move(field)) {}
  int line() const { return line_; }
  const std::string& field() const { return field_; }

 private:
  int line_;
  std::string field_;
};

}  // namespace qrr
