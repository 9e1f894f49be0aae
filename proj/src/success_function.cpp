#include "gplp/algebra/success_function.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>
#include <sstream>

#include "gplp/errors.hpp"

namespace gplp {

namespace {

bool values_equal(const DeltaValue& a, const DeltaValue& b) {
  if (a.index() != b.index()) return false;
  return a == b;
}

bool values_close(const DeltaValue& a, const DeltaValue& b, double tol) {
  if (a.index() != b.index()) return false;
  if (auto* x = std::get_if<double>(&a)) {
    double y = std::get<double>(b);
    return std::abs(*x - y) <= tol * std::max(1.0, std::abs(y));
  }
  return a == b;
}

int compare_values(const DeltaValue& a, const DeltaValue& b) {
  if (a.index() != b.index()) return a.index() < b.index() ? -1 : 1;
  if (auto* x = std::get_if<double>(&a)) {
    double y = std::get<double>(b);
    return *x < y ? -1 : (*x > y ? 1 : 0);
  }
  const auto& s = std::get<std::string>(a);
  const auto& t = std::get<std::string>(b);
  return s < t ? -1 : (s > t ? 1 : 0);
}

// Rewrites N(arg; mean, var) so that the leading variable has coefficient 1
// and the constant sits in the mean. Returns the Jacobian factor 1/|a|.
// A constant argument is evaluated and returned as the whole factor, with
// `g` left untouched and `folded` set.
double canonicalize(GaussianFactor& g, bool& folded) {
  folded = false;
  if (g.arg.is_constant()) {
    folded = true;
    return normal_pdf(g.arg.constant(), g.mean, g.variance);
  }
  const std::string lead = g.arg.leading_variable();
  double a = g.arg.coeff(lead);
  double c = g.arg.constant();
  LinearForm arg;
  for (const auto& [v, k] : g.arg.coeffs()) arg.add_term(v, v == lead ? 1.0 : k / a);
  g.arg = std::move(arg);
  g.mean = (g.mean - c) / a;
  g.variance = g.variance / (a * a);
  return 1.0 / std::abs(a);
}

// Keeps at most one Gaussian per leading variable by merging pairs through
// the product identity. Multiplies `coeff` by every constant produced.
std::vector<GaussianFactor> reduce(std::vector<GaussianFactor> pending,
                                   double& coeff, OpStats* stats) {
  std::map<std::string, GaussianFactor> by_lead;
  while (!pending.empty()) {
    GaussianFactor g = std::move(pending.back());
    pending.pop_back();
    bool folded = false;
    coeff *= canonicalize(g, folded);
    if (folded) continue;
    const std::string lead = g.arg.leading_variable();
    auto it = by_lead.find(lead);
    if (it == by_lead.end()) {
      by_lead.emplace(lead, std::move(g));
      continue;
    }
    // N(V + r1; m1, s1) N(V + r2; m2, s2)
    //   = N(r2 - r1; m2 - m1, s1 + s2) N(V + (r1 s2 + r2 s1)/(s1 + s2); ...)
    GaussianFactor& h = it->second;
    if (stats) ++stats->factor_ops;
    LinearForm r1 = g.arg.without(lead);
    LinearForm r2 = h.arg.without(lead);
    double s1 = g.variance, s2 = h.variance, m1 = g.mean, m2 = h.mean;
    double s = s1 + s2;
    GaussianFactor cross{r2 - r1, m2 - m1, s};
    GaussianFactor merged{LinearForm::variable(lead) + (r1 * s2 + r2 * s1) * (1.0 / s),
                          (m1 * s2 + m2 * s1) / s, s1 * s2 / s};
    h = std::move(merged);
    pending.push_back(std::move(cross));
  }
  std::vector<GaussianFactor> out;
  out.reserve(by_lead.size());
  for (auto& [lead, g] : by_lead) out.push_back(std::move(g));
  return out;
}


int compare_deltas(const PPDFTerm& a, const PPDFTerm& b) {
  auto ia = a.deltas.begin(), ib = b.deltas.begin();
  for (; ia != a.deltas.end() && ib != b.deltas.end(); ++ia, ++ib) {
    if (ia->first != ib->first) return ia->first < ib->first ? -1 : 1;
    if (int c = compare_values(ia->second, ib->second)) return c;
  }
  if (ia == a.deltas.end() && ib == b.deltas.end()) return 0;
  return ia == a.deltas.end() ? -1 : 1;
}

int compare_gaussians(const PPDFTerm& a, const PPDFTerm& b) {
  std::size_t n = std::min(a.gaussians.size(), b.gaussians.size());
  for (std::size_t i = 0; i < n; ++i) {
    const auto& x = a.gaussians[i];
    const auto& y = b.gaussians[i];
    std::string sx = to_string(x.arg), sy = to_string(y.arg);
    if (sx != sy) return sx < sy ? -1 : 1;
    if (x.mean != y.mean) return x.mean < y.mean ? -1 : 1;
    if (x.variance != y.variance) return x.variance < y.variance ? -1 : 1;
  }
  if (a.gaussians.size() == b.gaussians.size()) return 0;
  return a.gaussians.size() < b.gaussians.size() ? -1 : 1;
}

bool term_less(const ConstrainedTerm& a, const ConstrainedTerm& b) {
  if (int c = compare_deltas(a.ppdf, b.ppdf)) return c < 0;
  std::string ca = to_string(a.constraints), cb = to_string(b.constraints);
  if (ca != cb) return ca < cb;
  if (int c = compare_gaussians(a.ppdf, b.ppdf)) return c < 0;
  return a.ppdf.coeff < b.ppdf.coeff;
}

bool same_shape(const ConstrainedTerm& a, const ConstrainedTerm& b) {
  if (a.ppdf.deltas.size() != b.ppdf.deltas.size()) return false;
  if (compare_deltas(a.ppdf, b.ppdf) != 0) return false;
  if (compare_gaussians(a.ppdf, b.ppdf) != 0) return false;
  const auto& ra = a.constraints.rows();
  const auto& rb = b.constraints.rows();
  return ra == rb;
}

// Substitutes real deltas into the rest of the term; false if the term
// vanishes.
bool sift_deltas(ConstrainedTerm& t) {
  for (const auto& [var, val] : t.ppdf.deltas) {
    if (auto* x = std::get_if<double>(&val)) {
      LinearForm c(*x);
      for (auto& g : t.ppdf.gaussians) g.arg = g.arg.substitute(var, c);
      t.constraints = t.constraints.substitute(var, c);
      if (!t.constraints.satisfiable()) return false;
    } else {
      for (const auto& g : t.ppdf.gaussians)
        if (g.mentions(var))
          throw AlgebraError("variable " + var +
                             " has a symbolic delta and a Gaussian factor");
      if (t.constraints.mentions(var))
        throw AlgebraError("variable " + var +
                           " has a symbolic delta and a linear constraint");
    }
  }
  return true;
}

std::map<std::string, double> numeric_values(const Assignment& a) {
  std::map<std::string, double> out;
  for (const auto& [k, v] : a)
    if (auto* x = std::get_if<double>(&v)) out.emplace(k, *x);
  return out;
}

void require_finite(double x, const char* what) {
  if (!std::isfinite(x)) throw AlgebraError(std::string("non-finite ") + what);
}

SuccessFunction integrate_term(const ConstrainedTerm& t, const std::string& var,
                               OpStats* stats) {
  if (t.constraints.mentions(var))
    throw AlgebraError("cannot integrate " + var +
                       ": a constraint still mentions it");
  ConstrainedTerm out = t;
  out.ppdf.gaussians.clear();
  // Each factor in var is rewritten as N(var; M_i, s_i), M_i linear.
  std::vector<std::pair<LinearForm, double>> centered;
  for (const auto& g : t.ppdf.gaussians) {
    if (!g.mentions(var)) {
      out.ppdf.gaussians.push_back(g);
      continue;
    }
    double a = g.arg.coeff(var);
    LinearForm m = (LinearForm(g.mean) - g.arg.without(var)) * (1.0 / a);
    centered.emplace_back(std::move(m), g.variance / (a * a));
    out.ppdf.coeff /= std::abs(a);
  }
  if (centered.empty()) {
    if (t.ppdf.deltas.count(var) == 0)
      return SuccessFunction({t});  // var absent
    out.ppdf.deltas.erase(var);
    return SuccessFunction({out});
  }
  auto [m, s] = centered.front();
  for (std::size_t i = 1; i < centered.size(); ++i) {
    if (stats) ++stats->factor_ops;
    const auto& [m2, s2] = centered[i];
    double total = s + s2;
    out.ppdf.gaussians.push_back({m - m2, 0.0, total});
    m = (m * s2 + m2 * s) * (1.0 / total);
    s = s * s2 / total;
  }
  // The remaining N(var; m, s) has unit mass.
  out.ppdf.deltas.erase(var);
  return SuccessFunction({out});
}

}  // namespace

std::string to_string(const DeltaValue& value) {
  if (auto* x = std::get_if<double>(&value)) return format_real(*x);
  return std::get<std::string>(value);
}

bool is_real(const DeltaValue& value) {
  return std::holds_alternative<double>(value);
}

double normal_pdf(double x, double mean, double variance) {
  double d = x - mean;
  return std::exp(-d * d / (2.0 * variance)) /
         std::sqrt(2.0 * std::numbers::pi * variance);
}

bool PPDFTerm::mentions(const std::string& var) const {
  if (deltas.count(var)) return true;
  for (const auto& g : gaussians)
    if (g.mentions(var)) return true;
  return false;
}

SuccessFunction SuccessFunction::one() {
  return SuccessFunction({ConstrainedTerm{}});
}

SuccessFunction SuccessFunction::constraint(const LinearForm& row) {
  ConstrainedTerm t;
  t.constraints.add(row);
  return simplify(SuccessFunction({t}));
}

SuccessFunction SuccessFunction::delta(const std::string& var, DeltaValue value,
                                       double coeff) {
  ConstrainedTerm t;
  t.ppdf.coeff = coeff;
  t.ppdf.deltas.emplace(var, std::move(value));
  return simplify(SuccessFunction({t}));
}

SuccessFunction SuccessFunction::gaussian(const LinearForm& arg, double mean,
                                          double variance, double coeff) {
  if (!(variance > 0.0)) throw AlgebraError("Gaussian variance must be > 0");
  ConstrainedTerm t;
  t.ppdf.coeff = coeff;
  t.ppdf.gaussians.push_back({arg, mean, variance});
  return simplify(SuccessFunction({t}));
}

std::vector<std::string> SuccessFunction::variables() const {
  std::set<std::string> vars;
  for (const auto& t : terms_) {
    for (const auto& [v, val] : t.ppdf.deltas) vars.insert(v);
    for (const auto& g : t.ppdf.gaussians)
      for (const auto& [v, c] : g.arg.coeffs()) vars.insert(v);
    for (const auto& v : t.constraints.variables()) vars.insert(v);
  }
  return {vars.begin(), vars.end()};
}

bool SuccessFunction::mentions(const std::string& var) const {
  for (const auto& t : terms_)
    if (t.ppdf.mentions(var) || t.constraints.mentions(var)) return true;
  return false;
}

SuccessFunction& SuccessFunction::operator+=(const SuccessFunction& other) {
  terms_.insert(terms_.end(), other.terms_.begin(), other.terms_.end());
  *this = simplify(*this);
  return *this;
}

SuccessFunction join(const SuccessFunction& a, const SuccessFunction& b,
                     OpStats* stats) {
  std::vector<ConstrainedTerm> out;
  out.reserve(a.size() * b.size());
  for (const auto& x : a.terms()) {
    for (const auto& y : b.terms()) {
      if (stats) {
        ++stats->join_pairs;
        stats->factor_ops +=
            x.ppdf.gaussians.size() + y.ppdf.gaussians.size() +
            x.ppdf.deltas.size() + y.ppdf.deltas.size();
        stats->constraint_ops += x.constraints.size() + y.constraints.size();
      }
      ConstrainedTerm t = x;
      t.ppdf.coeff *= y.ppdf.coeff;
      bool conflict = false;
      for (const auto& [v, val] : y.ppdf.deltas) {
        auto [it, inserted] = t.ppdf.deltas.emplace(v, val);
        if (!inserted && !values_equal(it->second, val)) {
          conflict = true;
          break;
        }
      }
      if (conflict) continue;
      t.ppdf.gaussians.insert(t.ppdf.gaussians.end(), y.ppdf.gaussians.begin(),
                              y.ppdf.gaussians.end());
      t.constraints = t.constraints.conjoin(y.constraints);
      if (!t.constraints.satisfiable()) continue;
      out.push_back(std::move(t));
    }
  }
  return simplify(SuccessFunction(std::move(out)));
}

SuccessFunction simplify(const SuccessFunction& psi) {
  std::vector<ConstrainedTerm> terms;
  for (ConstrainedTerm t : psi.terms()) {
    require_finite(t.ppdf.coeff, "coefficient");
    if (!(t.ppdf.coeff > 0.0) || !t.constraints.satisfiable()) continue;
    for (const auto& g : t.ppdf.gaussians)
      if (!(g.variance > 0.0) || !std::isfinite(g.variance))
        throw AlgebraError("Gaussian variance must be finite and > 0");
    if (!sift_deltas(t)) continue;
    t.ppdf.gaussians = reduce(std::move(t.ppdf.gaussians), t.ppdf.coeff, nullptr);
    if (!(t.ppdf.coeff > 0.0)) continue;
    terms.push_back(std::move(t));
  }
  std::sort(terms.begin(), terms.end(), term_less);
  std::vector<ConstrainedTerm> merged;
  for (auto& t : terms) {
    if (!merged.empty() && same_shape(merged.back(), t)) {
      merged.back().ppdf.coeff += t.ppdf.coeff;
      continue;
    }
    merged.push_back(std::move(t));
  }
  return SuccessFunction(std::move(merged));
}

SuccessFunction project(const SuccessFunction& psi, const std::string& var) {
  std::vector<ConstrainedTerm> out;
  for (const auto& t : psi.terms()) {
    if (!t.constraints.mentions(var)) {
      out.push_back(t);
      continue;
    }
    ConstrainedTerm p = t;
    LinearForm solved;
    p.constraints = t.constraints.eliminate(var, &solved);
    for (auto& g : p.ppdf.gaussians) g.arg = g.arg.substitute(var, solved);
    out.push_back(std::move(p));
  }
  return simplify(SuccessFunction(std::move(out)));
}

SuccessFunction integrate_out(const SuccessFunction& psi,
                              const std::string& var) {
  SuccessFunction out;
  for (const auto& t : psi.terms()) out += integrate_term(t, var, nullptr);
  return out;
}

SuccessFunction marginalize_discrete(const SuccessFunction& psi,
                                     const std::string& var,
                                     std::span<const DeltaValue> range) {
  std::vector<ConstrainedTerm> out;
  for (const auto& t : psi.terms()) {
    for (const auto& g : t.ppdf.gaussians)
      if (g.mentions(var))
        throw AlgebraError("discrete variable " + var +
                           " appears in a Gaussian factor");
    if (t.constraints.mentions(var))
      throw AlgebraError("discrete variable " + var +
                         " appears in a linear constraint");
    ConstrainedTerm u = t;
    auto it = u.ppdf.deltas.find(var);
    if (it != u.ppdf.deltas.end()) {
      bool known = std::any_of(range.begin(), range.end(), [&](const auto& r) {
        return values_equal(r, it->second);
      });
      if (!known)
        throw AlgebraError("value " + to_string(it->second) + " of " + var +
                           " is outside its declared range");
      u.ppdf.deltas.erase(it);
    }
    out.push_back(std::move(u));
  }
  return simplify(SuccessFunction(std::move(out)));
}

VarKind infer_kind(const SuccessFunction& psi, const std::string& var) {
  for (const auto& t : psi.terms()) {
    if (t.constraints.mentions(var)) return VarKind::Continuous;
    for (const auto& g : t.ppdf.gaussians)
      if (g.mentions(var)) return VarKind::Continuous;
    auto it = t.ppdf.deltas.find(var);
    if (it != t.ppdf.deltas.end() && is_real(it->second))
      return VarKind::Continuous;
  }
  return VarKind::Discrete;
}

namespace {

SuccessFunction eliminate_one(const SuccessFunction& psi,
                              const std::string& var, OpStats* stats) {
  std::vector<ConstrainedTerm> out;
  for (const auto& t : psi.terms()) {
    if (stats) ++stats->marginalized_terms;
    if (t.ppdf.deltas.count(var)) {
      // The value was already sifted into the other factors.
      ConstrainedTerm u = t;
      u.ppdf.deltas.erase(var);
      out.push_back(std::move(u));
      continue;
    }
    ConstrainedTerm u = t;
    if (u.constraints.mentions(var)) {
      if (stats) stats->constraint_ops += u.constraints.size();
      LinearForm solved;
      u.constraints = u.constraints.eliminate(var, &solved);
      for (auto& g : u.ppdf.gaussians) g.arg = g.arg.substitute(var, solved);
      // Projection leaves the term; the variable is gone from it.
      out.push_back(std::move(u));
      continue;
    }
    SuccessFunction integrated = integrate_term(u, var, stats);
    for (const auto& r : integrated.terms()) out.push_back(r);
  }
  return simplify(SuccessFunction(std::move(out)));
}

}  // namespace

SuccessFunction marginalize(const SuccessFunction& psi,
                            std::span<const std::string> vars,
                            OpStats* stats) {
  SuccessFunction cur = simplify(psi);
  std::vector<std::string> continuous, discrete;
  for (const auto& v : vars) {
    (infer_kind(cur, v) == VarKind::Continuous ? continuous : discrete)
        .push_back(v);
  }
  for (const auto& v : continuous) cur = eliminate_one(cur, v, stats);
  for (const auto& v : discrete) cur = eliminate_one(cur, v, stats);
  return cur;
}

SuccessFunction marginalize(const SuccessFunction& psi, const std::string& var,
                            OpStats* stats) {
  return marginalize(psi, std::span<const std::string>(&var, 1), stats);
}

double evaluate(const SuccessFunction& psi, const Assignment& assignment) {
  auto numeric = numeric_values(assignment);
  for (const auto& v : psi.variables())
    if (!assignment.count(v))
      throw AlgebraError("no value for variable " + v);
  double total = 0.0;
  for (const auto& t : psi.terms()) {
    double value = t.ppdf.coeff;
    for (const auto& [v, val] : t.ppdf.deltas) {
      if (!values_close(assignment.at(v), val, kSatisfiabilityTolerance)) {
        value = 0.0;
        break;
      }
    }
    if (value == 0.0) continue;
    if (!t.constraints.holds(numeric)) continue;
    for (const auto& g : t.ppdf.gaussians) {
      for (const auto& [v, c] : g.arg.coeffs())
        if (!numeric.count(v))
          throw AlgebraError("variable " + v + " needs a numeric value");
      value *= normal_pdf(g.arg.evaluate(numeric), g.mean, g.variance);
    }
    total += value;
  }
  return total;
}

double total_mass(const SuccessFunction& psi,
                  std::span<const std::string> vars) {
  SuccessFunction m = marginalize(psi, vars);
  auto left = m.variables();
  if (!left.empty())
    throw AlgebraError("variable " + left.front() +
                       " is still free after marginalization");
  double mass = 0.0;
  for (const auto& t : m.terms()) mass += t.ppdf.coeff;
  return mass;
}

SuccessFunction normalize(const SuccessFunction& psi,
                          std::span<const std::string> vars) {
  double mass = total_mass(psi, vars);
  if (!(mass > 0.0) || !std::isfinite(mass))
    throw AlgebraError("cannot normalize: total mass is " + format_real(mass));
  std::vector<ConstrainedTerm> terms = psi.terms();
  for (auto& t : terms) t.ppdf.coeff /= mass;
  return SuccessFunction(std::move(terms));
}

SuccessFunction normalize(const SuccessFunction& psi, const std::string& var) {
  return normalize(psi, std::span<const std::string>(&var, 1));
}

std::string to_string(const GaussianFactor& g) {
  return "N(" + to_string(g.arg) + "; " + format_real(g.mean) + ", " +
         format_real(g.variance) + ")";
}

std::string to_string(const PPDFTerm& term) {
  std::string s = format_real(term.coeff);
  for (const auto& [v, val] : term.deltas)
    s += " * delta(" + v + "=" + to_string(val) + ")";
  for (const auto& g : term.gaussians) s += " * " + to_string(g);
  return s;
}

std::string to_string(const SuccessFunction& psi) {
  if (psi.is_zero()) return "0";
  std::string s;
  for (const auto& t : psi.terms()) {
    if (!s.empty()) s += " + ";
    s += to_string(t.ppdf);
    if (!t.constraints.empty()) s += " | " + to_string(t.constraints);
  }
  return s;
}

bool approx_equal(const SuccessFunction& a, const SuccessFunction& b,
                  double tol) {
  if (a.size() != b.size()) return false;
  auto close = [tol](double x, double y) {
    return std::abs(x - y) <= tol * std::max(1.0, std::max(std::abs(x), std::abs(y)));
  };
  for (std::size_t i = 0; i < a.size(); ++i) {
    const auto& x = a.terms()[i];
    const auto& y = b.terms()[i];
    if (!close(x.ppdf.coeff, y.ppdf.coeff)) return false;
    if (x.ppdf.deltas.size() != y.ppdf.deltas.size()) return false;
    for (const auto& [v, val] : x.ppdf.deltas) {
      auto it = y.ppdf.deltas.find(v);
      if (it == y.ppdf.deltas.end() || !values_close(val, it->second, tol))
        return false;
    }
    if (x.ppdf.gaussians.size() != y.ppdf.gaussians.size()) return false;
    for (std::size_t k = 0; k < x.ppdf.gaussians.size(); ++k) {
      const auto& g = x.ppdf.gaussians[k];
      const auto& h = y.ppdf.gaussians[k];
      if (!g.arg.approx_equal(h.arg, tol) || !close(g.mean, h.mean) ||
          !close(g.variance, h.variance))
        return false;
    }
    if (!x.constraints.approx_equal(y.constraints, tol)) return false;
  }
  return true;
}

}  // namespace gplp
