#pragma once

#include <vector>

namespace gplp {

/// Factor N(a V - x; mu, s) with x already evaluated.
struct ScalarFactor {
  double a;
  double x;
  double mu;
  double s;
};

/// Integral over V of the product of the factors, by the pairwise
/// closed form: alpha * prod_{i<j} N(a_j x_i - a_i x_j; a_i mu_j - a_j mu_i,
/// sigma_ij^2).
double pairwise_closed_form(const std::vector<ScalarFactor>& factors);

/// sigma_ij^2 = sum_k a_k^2 prod_{l != k} s_l / prod_{k != i,j} s_k
double pair_variance(const std::vector<ScalarFactor>& factors, std::size_t i,
                     std::size_t j);

}  // namespace gplp
