#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gplp/front/program.hpp"

namespace gplp {

struct SampleEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  long n = 0;
};

struct SamplingOptions {
  long n = 100000;
  std::uint64_t seed = 1;
  double bandwidth = 0.05;  // Gaussian kernel width for the density
  /// Width of the Gaussian kernel that replaces exact equality when two
  /// different real literals meet in unification (observed values).
  double observation_width = 0.05;
  bool normalized = false;  // divide by the mean weight
};

/// Kernel density estimates of `var` at each grid point by forward sampling
/// all switches. Failed derivations contribute zero.
std::vector<SampleEstimate> mc_density(const Program& program,
                                       const Query& query,
                                       const std::string& var,
                                       const std::vector<double>& grid,
                                       const SamplingOptions& options);

}  // namespace gplp
