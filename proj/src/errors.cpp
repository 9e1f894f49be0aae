#include "gplp/errors.hpp"

namespace gplp {

const char* phase_name(Phase phase) {
  switch (phase) {
    case Phase::Parse: return "parse";
    case Phase::Validate: return "validate";
    case Phase::Derive: return "derive";
    case Phase::Algebra: return "algebra";
    case Phase::Oracle: return "oracle";
    case Phase::Cli: return "cli";
  }
  return "unknown";
}

ParseError::ParseError(int line, int column, const std::string& message)
    : Error(Phase::Parse, "line " + std::to_string(line) + ", column " +
                              std::to_string(column) + ": " + message),
      line_(line),
      column_(column) {}

}  // namespace gplp
