#pragma once

#include <map>
#include <string>
#include <utility>

#include "gplp/algebra/success_function.hpp"

namespace gplp {

struct QuadratureSpec {
  PPDFTerm integrand;  // Gaussians mention only `var`; no deltas
  std::string var;
  double lo = 0.0;
  double hi = 0.0;
  double tolerance = 1e-12;  // relative
};

/// Union of [m - 12 s, m + 12 s] over the factors, each solved for var.
std::pair<double, double> auto_interval(const PPDFTerm& term,
                                        const std::string& var);

/// Replaces the given variables by numbers inside the Gaussian arguments.
PPDFTerm restrict_term(const PPDFTerm& term,
                       const std::map<std::string, double>& values);

/// Adaptive Simpson estimate of the integral of the term over [lo, hi].
/// Throws OracleError on bad input or when subdivision runs out.
double quad_integrate(const QuadratureSpec& spec);

}  // namespace gplp
