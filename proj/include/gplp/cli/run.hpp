#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "gplp/engine/query.hpp"

namespace gplp {

struct GridSpec {
  std::string var;
  double lo = 0.0;
  double hi = 0.0;
  int steps = 2;

  /// Inclusive, evenly spaced points.
  std::vector<double> points() const;
};

/// Parses VAR:LO:HI:STEPS. Throws Error(Phase::Cli).
GridSpec parse_grid(const std::string& text);

enum class OutputFormat { Text, Json, Csv };

OutputFormat parse_format(const std::string& text);

struct RunConfig {
  std::string program_path;
  std::string query;
  bool normalize = false;
  std::optional<GridSpec> grid;
  OutputFormat format = OutputFormat::Text;
  int depth_limit = 10000;
  std::uint64_t seed = 1;
  bool check = false;
};

namespace exit_code {
inline constexpr int kOk = 0;
inline constexpr int kZero = 1;
inline constexpr int kProgramError = 2;
inline constexpr int kCheckFailed = 3;
}  // namespace exit_code

/// Runs one query and writes the result to `out`, diagnostics to `err`.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

/// Density values of `psi` along the grid; psi may mention only grid.var.
std::vector<double> grid_values(const SuccessFunction& psi,
                                const GridSpec& grid);

std::string emit_json(const QueryResult& result,
                      const std::optional<GridSpec>& grid = std::nullopt);

}  // namespace gplp
