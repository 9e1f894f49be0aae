#include "gplp/engine/query.hpp"

#include <algorithm>

#include "gplp/errors.hpp"

namespace gplp {

QueryResult answer_query(const Program& program, const Query& query,
                         const QueryOptions& options, OpStats* stats) {
  if (options.depth_limit < 1)
    throw DerivationError("depth limit must be at least 1");
  DeriveOptions dopt;
  dopt.depth_limit = options.depth_limit;
  dopt.protected_vars = query.variables;
  DeriveStats dstats;
  QueryResult result;
  result.variables = query.variables;
  auto root = derive(program, query.items, dopt, &dstats);
  result.derivation_count = dstats.successes;
  result.depth_reached = dstats.max_depth;
  result.diagnostics = dstats.diagnostics;
  if (!root) return result;
  SuccessFunction psi = success_function(program, *root, stats);
  // Anonymous query variables are summed out.
  std::vector<std::string> hidden;
  for (const auto& v : psi.variables())
    if (std::find(query.variables.begin(), query.variables.end(), v) ==
        query.variables.end())
      hidden.push_back(v);
  if (!hidden.empty()) psi = marginalize(psi, hidden, stats);
  if (options.normalize && !psi.is_zero())
    psi = normalize(psi, psi.variables());
  result.success_function = std::move(psi);
  return result;
}

QueryResult answer_query(const Program& program, const std::string& query,
                         const QueryOptions& options, OpStats* stats) {
  return answer_query(program, parse_query(query), options, stats);
}

}  // namespace gplp
