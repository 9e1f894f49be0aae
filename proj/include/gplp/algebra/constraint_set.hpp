#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "gplp/algebra/linear_form.hpp"

namespace gplp {

/// Residuals `0 = c` with |c| at or below this are read as `0 = 0`.
inline constexpr double kSatisfiabilityTolerance = 1e-9;

/// Conjunction of linear equalities `row = 0` over continuous variables,
/// kept in reduced row-echelon form: each row's pivot is its
/// lexicographically smallest variable, with coefficient 1, and no other
/// row mentions that pivot. An inconsistent set collapses to Unsat.
class ConstraintSet {
 public:
  ConstraintSet() = default;

  static ConstraintSet unsat();
  static ConstraintSet of(std::vector<LinearForm> rows);

  bool satisfiable() const { return !unsat_; }
  bool empty() const { return !unsat_ && rows_.empty(); }
  std::size_t size() const { return rows_.size(); }
  const std::vector<LinearForm>& rows() const { return rows_; }

  /// Adds `row = 0`.
  void add(LinearForm row);
  ConstraintSet conjoin(const ConstraintSet& other) const;

  bool mentions(const std::string& var) const;
  std::vector<std::string> variables() const;

  /// `var = form` implied by the set, or nullopt when no row mentions var.
  /// Uses the row where var is pivot if any, else the first row with var.
  std::optional<LinearForm> solved_form(const std::string& var) const;

  /// Drops the row solved for `var` and substitutes its solved form into
  /// the remaining rows. `solved` receives the form when non-null.
  ConstraintSet eliminate(const std::string& var, LinearForm* solved) const;

  ConstraintSet substitute(const std::string& var,
                           const LinearForm& replacement) const;

  bool holds(const std::map<std::string, double>& values,
             double tol = kSatisfiabilityTolerance) const;

  bool approx_equal(const ConstraintSet& other, double tol) const;

 private:
  void canonicalize();

  std::vector<LinearForm> rows_;
  bool unsat_ = false;
};

/// `X = Y + Z` style, rows joined by " & "; "true" when empty.
std::string to_string(const ConstraintSet& set);

}  // namespace gplp
