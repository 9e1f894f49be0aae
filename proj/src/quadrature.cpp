#include "gplp/oracle/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "gplp/errors.hpp"

namespace gplp {

namespace {

struct Centered {
  double center;
  double sd;
};

// Factor N(a V + c; mu, s) as a function of V: center (mu - c)/a and
// standard deviation sqrt(s)/|a|.
std::vector<Centered> centers(const PPDFTerm& term, const std::string& var) {
  std::vector<Centered> out;
  for (const auto& g : term.gaussians) {
    double a = g.arg.coeff(var);
    if (a == 0.0) continue;
    out.push_back({(g.mean - g.arg.constant()) / a, std::sqrt(g.variance) / std::abs(a)});
  }
  return out;
}

class Simpson {
 public:
  Simpson(const QuadratureSpec& spec) : spec_(spec) {}

  double f(double x) const {
    double v = spec_.integrand.coeff;
    for (const auto& g : spec_.integrand.gaussians) {
      double arg = g.arg.constant() + g.arg.coeff(spec_.var) * x;
      v *= normal_pdf(arg, g.mean, g.variance);
    }
    return v;
  }

  double panel(double a, double b, double eps) {
    double m = 0.5 * (a + b);
    double fa = f(a), fm = f(m), fb = f(b);
    double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return refine(a, b, fa, fm, fb, whole, eps, 0);
  }

 private:
  double refine(double a, double b, double fa, double fm, double fb,
                double whole, double eps, int depth) {
    double m = 0.5 * (a + b);
    double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    double flm = f(lm), frm = f(rm);
    double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    double diff = left + right - whole;
    if (std::abs(diff) <= 15.0 * eps) return left + right + diff / 15.0;
    if (depth >= kMaxDepth)
      throw OracleError("quadrature did not converge near " + std::to_string(m));
    return refine(a, m, fa, flm, fm, left, eps / 2.0, depth + 1) +
           refine(m, b, fm, frm, fb, right, eps / 2.0, depth + 1);
  }

  static constexpr int kMaxDepth = 60;
  const QuadratureSpec& spec_;
};

}  // namespace

std::pair<double, double> auto_interval(const PPDFTerm& term,
                                        const std::string& var) {
  auto cs = centers(term, var);
  if (cs.empty()) throw OracleError("integrand does not depend on " + var);
  double lo = INFINITY, hi = -INFINITY;
  for (const auto& c : cs) {
    lo = std::min(lo, c.center - 12.0 * c.sd);
    hi = std::max(hi, c.center + 12.0 * c.sd);
  }
  return {lo, hi};
}

PPDFTerm restrict_term(const PPDFTerm& term,
                       const std::map<std::string, double>& values) {
  PPDFTerm out = term;
  for (auto& g : out.gaussians)
    for (const auto& [v, x] : values) g.arg = g.arg.substitute(v, LinearForm(x));
  return out;
}

double quad_integrate(const QuadratureSpec& spec) {
  if (!(spec.lo < spec.hi)) throw OracleError("quadrature needs lo < hi");
  if (!(spec.tolerance > 0.0)) throw OracleError("tolerance must be positive");
  if (!spec.integrand.deltas.empty())
    throw OracleError("quadrature integrand has delta factors");
  for (const auto& g : spec.integrand.gaussians)
    for (const auto& [v, c] : g.arg.coeffs())
      if (v != spec.var)
        throw OracleError("integrand has free variable " + v);

  // Breakpoints: panel grid, every factor center, and a fine comb around
  // the point where the product peaks (precision-weighted center).
  auto cs = centers(spec.integrand, spec.var);
  std::vector<double> cuts;
  const int panels = 200;
  for (int i = 0; i <= panels; ++i)
    cuts.push_back(spec.lo + (spec.hi - spec.lo) * i / panels);
  double wsum = 0.0, wc = 0.0;
  for (const auto& c : cs) {
    cuts.push_back(c.center);
    double w = 1.0 / (c.sd * c.sd);
    wsum += w;
    wc += w * c.center;
  }
  if (wsum > 0.0) {
    double peak = wc / wsum, sd = 1.0 / std::sqrt(wsum);
    for (int k = -16; k <= 16; ++k) cuts.push_back(peak + 0.5 * k * sd);
  }
  cuts.erase(std::remove_if(cuts.begin(), cuts.end(),
                            [&](double x) { return x < spec.lo || x > spec.hi; }),
             cuts.end());
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  Simpson s(spec);
  // Coarse pass fixes the absolute error budget.
  double coarse = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    double a = cuts[i], b = cuts[i + 1];
    coarse += (b - a) / 6.0 * (s.f(a) + 4.0 * s.f(0.5 * (a + b)) + s.f(b));
  }
  if (coarse == 0.0) return 0.0;
  double eps = spec.tolerance * std::abs(coarse) / (cuts.size() - 1);
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i)
    total += s.panel(cuts[i], cuts[i + 1], eps);
  return total;
}

}  // namespace gplp
