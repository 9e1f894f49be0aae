#pragma once

#include <stdexcept>
#include <string>

namespace gplp {

/// Pipeline stage that raised an error; used to tag diagnostics.
enum class Phase { Parse, Validate, Derive, Algebra, Oracle, Cli };

const char* phase_name(Phase phase);

class Error : public std::runtime_error {
 public:
  Error(Phase phase, const std::string& message)
      : std::runtime_error(message), phase_(phase) {}

  Phase phase() const { return phase_; }

 private:
  Phase phase_;
};

class ParseError : public Error {
 public:
  ParseError(int line, int column, const std::string& message);

  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

class ValidationError : public Error {
 public:
  explicit ValidationError(const std::string& message)
      : Error(Phase::Validate, message) {}
};

class DerivationError : public Error {
 public:
  explicit DerivationError(const std::string& message)
      : Error(Phase::Derive, message) {}
};

class AlgebraError : public Error {
 public:
  explicit AlgebraError(const std::string& message)
      : Error(Phase::Algebra, message) {}
};

class OracleError : public Error {
 public:
  explicit OracleError(const std::string& message)
      : Error(Phase::Oracle, message) {}
};

}  // namespace gplp
