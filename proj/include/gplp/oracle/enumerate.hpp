#pragma once

#include <cstddef>
#include <vector>

#include "gplp/algebra/success_function.hpp"
#include "gplp/front/program.hpp"

namespace gplp {

struct EnumeratedAnswer {
  Assignment values;  // query variable -> ground value
  double probability = 0.0;
};

/// Exact answer probabilities of a discrete program by expanding every
/// switch outcome along every derivation. Throws OracleError when the
/// program has continuous switches or constraints, or when more than
/// `budget` branches are explored.
std::vector<EnumeratedAnswer> enumerate_discrete(const Program& program,
                                                 const Query& query,
                                                 std::size_t budget = 1000000);

}  // namespace gplp
