#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

namespace gplp {

class Term;
using TermPtr = std::shared_ptr<const Term>;

enum class TermKind { Variable, Atom, Integer, Real, Compound };

/// Immutable first-order term. Integers and reals are both stored as doubles;
/// the kind only records how the literal was written.
class Term {
 public:
  static TermPtr variable(std::string name);
  static TermPtr atom(std::string name);
  static TermPtr integer(double value);
  static TermPtr real(double value);
  static TermPtr number(double value, bool integral);
  static TermPtr compound(std::string functor, std::vector<TermPtr> args);

  TermKind kind() const { return kind_; }
  /// Variable name, atom text or compound functor.
  const std::string& name() const { return name_; }
  double number() const { return number_; }
  const std::vector<TermPtr>& args() const { return args_; }
  std::size_t arity() const { return args_.size(); }

  bool is_variable() const { return kind_ == TermKind::Variable; }
  bool is_atom() const { return kind_ == TermKind::Atom; }
  bool is_number() const {
    return kind_ == TermKind::Integer || kind_ == TermKind::Real;
  }
  bool is_compound() const { return kind_ == TermKind::Compound; }
  bool is_ground() const { return ground_; }

  /// "name/arity" for atoms and compounds.
  std::string indicator() const;

 private:
  Term(TermKind kind, std::string name, double number,
       std::vector<TermPtr> args);

  TermKind kind_;
  std::string name_;
  double number_ = 0.0;
  std::vector<TermPtr> args_;
  bool ground_ = true;
};

/// Shortest decimal text that parses back to the same double.
std::string format_number(double value, bool integral);

/// Prolog-style rendering; reparses to a structurally identical term.
std::string to_string(const Term& term);
inline std::string to_string(const TermPtr& term) { return to_string(*term); }

bool structurally_equal(const Term& a, const Term& b);
inline bool structurally_equal(const TermPtr& a, const TermPtr& b) {
  return structurally_equal(*a, *b);
}

/// Appends variable names of `term` to `out` in first-occurrence order,
/// skipping names already present.
void collect_variables(const Term& term, std::vector<std::string>& out);
std::vector<std::string> variables_of(const TermPtr& term);

bool occurs_in(const std::string& var, const Term& term);

/// Variable bindings. Values may mention other bound variables; `apply`
/// resolves chains.
using Substitution = std::map<std::string, TermPtr>;

TermPtr apply(const TermPtr& term, const Substitution& subst);

/// Renames variables through `renaming` (no chain resolution).
TermPtr rename(const TermPtr& term,
               const std::map<std::string, std::string>& renaming);

std::string to_string(const Substitution& subst);

}  // namespace gplp
