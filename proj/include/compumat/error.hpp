#pragma once

#include <stdexcept>
#include <string>

namespace compumat {

/// Failure categories. The numeric values double as CLI exit codes and
/// service error codes.
enum class ErrorKind {
  check_failed = 1,
  validation = 2,
  budget = 3,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }
  int code() const noexcept { return static_cast<int>(kind_); }

 private:
  ErrorKind kind_;
};

class ValidationError : public Error {
 public:
  explicit ValidationError(const std::string& what) : Error(ErrorKind::validation, what) {}
};

/// Two dipoles at the same point, or a zero gap between sheets.
class DegenerateGeometryError : public ValidationError {
 public:
  explicit DegenerateGeometryError(const std::string& what) : ValidationError(what) {}
};

/// Malformed input text; `line()` is 1-based, 0 when unknown.
class ParseError : public ValidationError {
 public:
  ParseError(const std::string& what, int line);
  int line() const noexcept { return line_; }

 private:
  int line_;
};

class BudgetError : public Error {
 public:
  explicit BudgetError(const std::string& what) : Error(ErrorKind::budget, what) {}
};

}  // namespace compumat
