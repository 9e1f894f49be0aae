#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "gplp/algebra/constraint_set.hpp"
#include "gplp/algebra/linear_form.hpp"

namespace gplp {

/// Point a delta sits on: a real for continuous (hybrid) variables, or the
/// text of a ground atom/term for discrete ones.
using DeltaValue = std::variant<double, std::string>;

std::string to_string(const DeltaValue& value);
bool is_real(const DeltaValue& value);

struct DeltaFactor {
  std::string variable;
  DeltaValue value;
};

/// Univariate Gaussian density N(mean, variance) evaluated at `arg`.
struct GaussianFactor {
  LinearForm arg;
  double mean = 0.0;
  double variance = 1.0;

  bool mentions(const std::string& var) const { return arg.mentions(var); }
};

/// Density of N(mean, variance) at x.
double normal_pdf(double x, double mean, double variance);

/// Product PDF term: coeff * prod(deltas) * prod(gaussians).
struct PPDFTerm {
  double coeff = 1.0;
  std::map<std::string, DeltaValue> deltas;  // at most one per variable
  std::vector<GaussianFactor> gaussians;

  bool mentions(const std::string& var) const;
};

struct ConstrainedTerm {
  PPDFTerm ppdf;
  ConstraintSet constraints;
};

/// Finite sum of constrained PPDF terms. The empty sum is the zero function.
class SuccessFunction {
 public:
  SuccessFunction() = default;
  explicit SuccessFunction(std::vector<ConstrainedTerm> terms)
      : terms_(std::move(terms)) {}

  /// <1, true>
  static SuccessFunction one();
  static SuccessFunction zero() { return {}; }
  static SuccessFunction constraint(const LinearForm& row);
  static SuccessFunction delta(const std::string& var, DeltaValue value,
                               double coeff = 1.0);
  static SuccessFunction gaussian(const LinearForm& arg, double mean,
                                  double variance, double coeff = 1.0);

  const std::vector<ConstrainedTerm>& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  bool is_zero() const { return terms_.empty(); }

  /// D_i and C_i accessors.
  const PPDFTerm& ppdf(std::size_t i) const { return terms_.at(i).ppdf; }
  const ConstraintSet& constraints(std::size_t i) const {
    return terms_.at(i).constraints;
  }

  /// All variables mentioned anywhere, sorted.
  std::vector<std::string> variables() const;
  bool mentions(const std::string& var) const;

  SuccessFunction& operator+=(const SuccessFunction& other);

 private:
  std::vector<ConstrainedTerm> terms_;
};

/// Work counters for the complexity smoke checks.
struct OpStats {
  std::uint64_t join_pairs = 0;
  std::uint64_t factor_ops = 0;
  std::uint64_t constraint_ops = 0;
  std::uint64_t marginalized_terms = 0;
};

/// Sum over term pairs of <D_i D_j, C_i & C_j>, simplified.
SuccessFunction join(const SuccessFunction& a, const SuccessFunction& b,
                     OpStats* stats = nullptr);

/// Drops zero/inconsistent terms, sifts real-valued deltas into the other
/// factors, reduces each term's Gaussians to at most one per variable and
/// merges terms that differ only in their coefficient.
SuccessFunction simplify(const SuccessFunction& psi);

/// Substitutes the solved form of `var` from each term's constraints.
SuccessFunction project(const SuccessFunction& psi, const std::string& var);

/// Closed-form integral over `var`. Throws if a constraint mentions `var`.
SuccessFunction integrate_out(const SuccessFunction& psi,
                              const std::string& var);

/// Sum over the values of a discrete variable. `range` lists the declared
/// values; a delta outside it is an error.
SuccessFunction marginalize_discrete(const SuccessFunction& psi,
                                     const std::string& var,
                                     std::span<const DeltaValue> range);

enum class VarKind { Continuous, Discrete };

/// Kind inferred from occurrences: continuous if the variable appears in a
/// Gaussian, a constraint or a real-valued delta.
VarKind infer_kind(const SuccessFunction& psi, const std::string& var);

/// M(psi, vars). Continuous variables are eliminated first, in the order
/// given, then discrete ones.
SuccessFunction marginalize(const SuccessFunction& psi,
                            std::span<const std::string> vars,
                            OpStats* stats = nullptr);
SuccessFunction marginalize(const SuccessFunction& psi, const std::string& var,
                            OpStats* stats = nullptr);

using Assignment = std::map<std::string, DeltaValue>;

/// Pointwise value; deltas count 1 when matched.
double evaluate(const SuccessFunction& psi, const Assignment& assignment);

/// Total mass over `vars` (must leave no free variable behind).
double total_mass(const SuccessFunction& psi,
                  std::span<const std::string> vars);

/// Rescales so the mass over `vars` is 1. Throws on zero or infinite mass.
SuccessFunction normalize(const SuccessFunction& psi,
                          std::span<const std::string> vars);
SuccessFunction normalize(const SuccessFunction& psi, const std::string& var);

/// Canonical rendering:
///   k * delta(V=val) * N(<form>; mu, var) | <constraints>
/// terms joined by " + ", sorted by delta then constraint signature.
std::string to_string(const SuccessFunction& psi);
std::string to_string(const PPDFTerm& term);
std::string to_string(const GaussianFactor& g);

/// Structural comparison with a relative tolerance on all reals.
bool approx_equal(const SuccessFunction& a, const SuccessFunction& b,
                  double tol);

}  // namespace gplp
