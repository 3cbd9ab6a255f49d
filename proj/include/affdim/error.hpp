#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>

namespace affdim {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Singular or otherwise unusable linear part.
class InvalidMatrix : public Error {
 public:
  using Error::Error;
};

/// Argument outside the mathematical domain of an operation (negative s, δ ∉ (0,1], ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

/// An enumeration would exceed its configured leaf/word cap.
class BudgetExceeded : public Error {
 public:
  using Error::Error;
};

class Unsupported : public Error {
 public:
  using Error::Error;
};

/// A structural invariant did not hold on computed data (signals a bug or a broken precondition upstream).
class InvariantViolation : public Error {
 public:
  using Error::Error;
};

/// Configuration text could not be parsed or validated.
/// `line` is 1-based for syntax errors and 0 when the error is semantic; `key` holds the key path.
class ConfigError : public Error {
 public:
  ConfigError(const std::string& message, std::size_t line, std::string key)
      : Error(format(message, line, key)), line_(line), key_(std::move(key)) {}

  std::size_t line() const noexcept { return line_; }
  const std::string& key() const noexcept { return key_; }

 private:
  static std::string format(const std::string& message, std::size_t line, const std::string& key) {
    std::string out;
    if (line > 0) out += "line " + std::to_string(line) + ": ";
    if (!key.empty()) out += key + ": ";
    return out + message;
  }

  std::size_t line_;
  std::string key_;
};

}  // namespace affdim
