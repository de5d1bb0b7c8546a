#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace multitile {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Malformed input text: scheme files, rational literals, time expressions.
class ParseError : public Error {
public:
  using Error::Error;
};

/// Input that parses but violates a structural constraint (unknown id,
/// scale outside (0,1), duplicate label, ...).
class SchemeError : public Error {
public:
  using Error::Error;
};

/// A mathematical precondition does not hold (dividing by zero, a formula
/// applied to a commensurable scheme, m > k, ...).
class DomainError : public Error {
public:
  using Error::Error;
};

/// An enumeration or generation exceeded its configured cap. Partial results
/// are never returned alongside this error.
class BudgetExceeded : public Error {
public:
  BudgetExceeded(const std::string& what, std::uint64_t budget)
      : Error(what + " (budget " + std::to_string(budget) + ")"), budget_(budget) {}
  std::uint64_t budget() const { return budget_; }

private:
  std::uint64_t budget_;
};

}  // namespace multitile
