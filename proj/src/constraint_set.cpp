#include "gplp/algebra/constraint_set.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace gplp {

ConstraintSet ConstraintSet::unsat() {
  ConstraintSet s;
  s.unsat_ = true;
  return s;
}

ConstraintSet ConstraintSet::of(std::vector<LinearForm> rows) {
  ConstraintSet s;
  s.rows_ = std::move(rows);
  s.canonicalize();
  return s;
}

void ConstraintSet::add(LinearForm row) {
  if (unsat_) return;
  rows_.push_back(std::move(row));
  canonicalize();
}

ConstraintSet ConstraintSet::conjoin(const ConstraintSet& other) const {
  if (unsat_ || other.unsat_) return unsat();
  if (other.rows_.empty()) return *this;
  if (rows_.empty()) return other;
  ConstraintSet out = *this;
  out.rows_.insert(out.rows_.end(), other.rows_.begin(), other.rows_.end());
  out.canonicalize();
  return out;
}

bool ConstraintSet::mentions(const std::string& var) const {
  return std::any_of(rows_.begin(), rows_.end(),
                     [&](const LinearForm& r) { return r.mentions(var); });
}

std::vector<std::string> ConstraintSet::variables() const {
  std::set<std::string> vars;
  for (const auto& r : rows_)
    for (const auto& [v, c] : r.coeffs()) vars.insert(v);
  return {vars.begin(), vars.end()};
}

namespace {

std::optional<std::size_t> row_for(const std::vector<LinearForm>& rows,
                                   const std::string& var) {
  for (std::size_t i = 0; i < rows.size(); ++i)
    if (rows[i].leading_variable() == var) return i;
  for (std::size_t i = 0; i < rows.size(); ++i)
    if (rows[i].mentions(var)) return i;
  return std::nullopt;
}

LinearForm solve_row(const LinearForm& row, const std::string& var) {
  double a = row.coeff(var);
  return row.without(var) * (-1.0 / a);
}

}  // namespace

std::optional<LinearForm> ConstraintSet::solved_form(
    const std::string& var) const {
  auto idx = row_for(rows_, var);
  if (!idx) return std::nullopt;
  return solve_row(rows_[*idx], var);
}

ConstraintSet ConstraintSet::eliminate(const std::string& var,
                                       LinearForm* solved) const {
  auto idx = row_for(rows_, var);
  if (!idx) return *this;
  LinearForm form = solve_row(rows_[*idx], var);
  if (solved) *solved = form;
  ConstraintSet out;
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    if (i == *idx) continue;
    out.rows_.push_back(rows_[i].substitute(var, form));
  }
  out.canonicalize();
  return out;
}

ConstraintSet ConstraintSet::substitute(const std::string& var,
                                        const LinearForm& replacement) const {
  if (unsat_ || !mentions(var)) return *this;
  ConstraintSet out;
  for (const auto& r : rows_) out.rows_.push_back(r.substitute(var, replacement));
  out.canonicalize();
  return out;
}

bool ConstraintSet::holds(const std::map<std::string, double>& values,
                          double tol) const {
  if (unsat_) return false;
  for (const auto& r : rows_) {
    double scale = std::abs(r.constant());
    for (const auto& [v, c] : r.coeffs())
      scale = std::max(scale, std::abs(c * values.at(v)));
    if (std::abs(r.evaluate(values)) > tol * std::max(1.0, scale)) return false;
  }
  return true;
}

bool ConstraintSet::approx_equal(const ConstraintSet& other, double tol) const {
  if (unsat_ != other.unsat_ || rows_.size() != other.rows_.size())
    return false;
  for (std::size_t i = 0; i < rows_.size(); ++i)
    if (!rows_[i].approx_equal(other.rows_[i], tol)) return false;
  return true;
}

void ConstraintSet::canonicalize() {
  if (unsat_) return;
  std::set<std::string> vars;
  for (const auto& r : rows_)
    for (const auto& [v, c] : r.coeffs()) vars.insert(v);

  std::vector<LinearForm> pending = std::move(rows_);
  std::vector<LinearForm> reduced;
  for (const auto& var : vars) {
    // partial pivoting among rows not yet reduced
    std::size_t best = pending.size();
    double best_mag = 0.0;
    for (std::size_t i = 0; i < pending.size(); ++i) {
      double mag = std::abs(pending[i].coeff(var));
      if (mag > best_mag) {
        best_mag = mag;
        best = i;
      }
    }
    if (best == pending.size()) continue;
    LinearForm pivot = pending[best] * (1.0 / pending[best].coeff(var));
    pending.erase(pending.begin() + static_cast<std::ptrdiff_t>(best));
    LinearForm solved = pivot.without(var) * -1.0;
    for (auto& r : pending) r = r.substitute(var, solved);
    for (auto& r : reduced) r = r.substitute(var, solved);
    reduced.push_back(std::move(pivot));
  }
  for (const auto& r : pending) {
    if (std::abs(r.constant()) > kSatisfiabilityTolerance) {
      unsat_ = true;
      rows_.clear();
      return;
    }
  }
  // reduced rows whose pivot was cancelled by later substitution
  std::vector<LinearForm> kept;
  for (auto& r : reduced) {
    if (r.is_constant()) {
      if (std::abs(r.constant()) > kSatisfiabilityTolerance) {
        unsat_ = true;
        rows_.clear();
        return;
      }
      continue;
    }
    double lead = r.coeff(r.leading_variable());
    if (lead != 1.0) r *= 1.0 / lead;
    kept.push_back(std::move(r));
  }
  std::sort(kept.begin(), kept.end(), [](const LinearForm& a, const LinearForm& b) {
    return a.leading_variable() < b.leading_variable();
  });
  rows_ = std::move(kept);
}

std::string to_string(const ConstraintSet& set) {
  if (!set.satisfiable()) return "false";
  if (set.empty()) return "true";
  std::string out;
  for (const auto& row : set.rows()) {
    if (!out.empty()) out += " & ";
    const std::string& pivot = row.leading_variable();
    LinearForm rhs = row.without(pivot) * (-1.0 / row.coeff(pivot));
    out += pivot + " = " + to_string(rhs);
  }
  return out;
}

}  // namespace gplp
