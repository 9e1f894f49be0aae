#include "gplp/oracle/closed_form.hpp"

#include <cmath>
#include <numbers>

#include "gplp/errors.hpp"

namespace gplp {

double pair_variance(const std::vector<ScalarFactor>& f, std::size_t i,
                     std::size_t j) {
  double num = 0.0;
  for (std::size_t k = 0; k < f.size(); ++k) {
    double prod = f[k].a * f[k].a;
    for (std::size_t l = 0; l < f.size(); ++l)
      if (l != k) prod *= f[l].s;
    num += prod;
  }
  double den = 1.0;
  for (std::size_t k = 0; k < f.size(); ++k)
    if (k != i && k != j) den *= f[k].s;
  return num / den;
}

double pairwise_closed_form(const std::vector<ScalarFactor>& f) {
  if (f.empty()) throw OracleError("no factors to integrate");
  const double two_pi = 2.0 * std::numbers::pi;
  double precision = 0.0;  // sum a_k^2 / s_k
  double log_alpha = 0.0;
  for (const auto& x : f) {
    if (x.a == 0.0 || !(x.s > 0.0)) throw OracleError("degenerate factor");
    precision += x.a * x.a / x.s;
    log_alpha -= 0.5 * std::log(two_pi * x.s);
  }
  log_alpha += 0.5 * std::log(two_pi / precision);
  double log_value = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    for (std::size_t j = i + 1; j < f.size(); ++j) {
      double v = pair_variance(f, i, j);
      log_alpha += 0.5 * std::log(two_pi * v);
      double arg = f[j].a * f[i].x - f[i].a * f[j].x;
      double mean = f[i].a * f[j].mu - f[j].a * f[i].mu;
      double d = arg - mean;
      log_value += -0.5 * std::log(two_pi * v) - d * d / (2.0 * v);
    }
  }
  return std::exp(log_alpha + log_value);
}

}  // namespace gplp
