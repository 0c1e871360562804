#pragma once

#include <stdexcept>
#include <string>

namespace ppszkit {

/// Base class for all errors thrown by this library.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// A documented precondition was violated by the caller.
class ContractViolation : public Error {
 public:
  using Error::Error;
};

/// The input exceeds a configured cap (enumeration, permutation, engine width).
class CapExceeded : public Error {
 public:
  using Error::Error;
};

/// An auto-derived repetition count exceeds the configured trial budget.
class BudgetExceeded : public Error {
 public:
  using Error::Error;
};

/// DIMACS parse failure. Lines are 1-based.
class ParseError : public Error {
 public:
  ParseError(int line, const std::string& msg)
      : Error("parse error at line " + std::to_string(line) + ": " + msg),
        line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

}  // namespace ppszkit
