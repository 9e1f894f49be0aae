#include "gplp/oracle/kalman.hpp"

namespace gplp {

std::pair<double, double> kalman_reference(double mu0, double s0, double ss,
                                           double sv,
                                           const std::vector<double>& obs) {
  double m = mu0, p = s0;
  for (double v : obs) {
    p += ss;
    double k = p / (p + sv);
    m += k * (v - m);
    p *= 1.0 - k;
  }
  return {m, p};
}

}  // namespace gplp
