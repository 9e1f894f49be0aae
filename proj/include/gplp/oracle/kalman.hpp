#pragma once

#include <utility>
#include <vector>

namespace gplp {

/// Filtered (mean, variance) of a scalar random walk after the given
/// observations: predict P += ss, update with gain P / (P + sv).
std::pair<double, double> kalman_reference(double mu0, double s0, double ss,
                                           double sv,
                                           const std::vector<double>& obs);

}  // namespace gplp
