#pragma once

#include <string>
#include <vector>

#include "gplp/algebra/success_function.hpp"
#include "gplp/engine/derivation.hpp"
#include "gplp/front/program.hpp"

namespace gplp {

struct QueryOptions {
  bool normalize = false;
  int depth_limit = 10000;
};

struct QueryResult {
  SuccessFunction success_function;
  int derivation_count = 0;
  int depth_reached = 0;
  std::vector<std::string> variables;
  std::vector<std::string> diagnostics;
};

QueryResult answer_query(const Program& program, const Query& query,
                         const QueryOptions& options = {},
                         OpStats* stats = nullptr);
QueryResult answer_query(const Program& program, const std::string& query,
                         const QueryOptions& options = {},
                         OpStats* stats = nullptr);

}  // namespace gplp
