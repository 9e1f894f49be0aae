#pragma once

#include <map>
#include <string>
#include <variant>
#include <vector>

#include "gplp/front/term.hpp"

namespace gplp {

struct CallItem {
  TermPtr goal;
};

/// msw(Switch, Instance, Outcome) or msw(Switch, Outcome). `site` numbers
/// msw calls in program text; msw/2 uses it as the implicit instance.
struct MswItem {
  TermPtr switch_term;
  TermPtr instance;  // null for msw/2
  TermPtr outcome;
  int site = 0;
};

/// Linear equality `lhs = rhs` between arithmetic expressions.
struct ConstraintItem {
  TermPtr lhs;
  TermPtr rhs;
};

/// `target is expr`
struct ArithItem {
  TermPtr target;
  TermPtr expr;
};

enum class CompareOp { Lt, Gt, Le, Ge, Eq };

struct CompareItem {
  CompareOp op;
  TermPtr lhs;
  TermPtr rhs;
};

struct UnifyItem {
  TermPtr lhs;
  TermPtr rhs;
};

using BodyItem = std::variant<CallItem, MswItem, ConstraintItem, ArithItem,
                              CompareItem, UnifyItem>;

const char* compare_symbol(CompareOp op);

/// Term form of an item, e.g. `msw(m, M)` or `X = Y + Z`.
TermPtr item_term(const BodyItem& item);
std::string to_string(const BodyItem& item);

BodyItem apply(const BodyItem& item, const Substitution& subst);
BodyItem rename(const BodyItem& item,
                const std::map<std::string, std::string>& renaming);
void collect_variables(const BodyItem& item, std::vector<std::string>& out);
bool structurally_equal(const BodyItem& a, const BodyItem& b);

struct Clause {
  TermPtr head;
  std::vector<BodyItem> body;
  int id = 0;
};

struct Discrete {
  std::vector<TermPtr> values;
  std::vector<double> probs;
};

struct Gaussian {
  double mean = 0.0;
  double variance = 1.0;
};

using Distribution = std::variant<Discrete, Gaussian>;

/// values(Pattern, real) or values(Pattern, [v1, ...]).
struct ValuesDecl {
  TermPtr pattern;
  bool real = false;
  std::vector<TermPtr> values;
};

/// set_sw(Pattern, Dist) as written. Discrete probabilities are kept
/// without values; the matching ValuesDecl supplies them.
struct SetSwDecl {
  TermPtr pattern;
  bool gaussian = false;
  Gaussian params;
  std::vector<double> probs;
};

/// A distribution attached to every switch that unifies with `pattern`.
struct SwitchDecl {
  TermPtr pattern;
  Distribution dist;
  bool defaulted = false;  // uniform fallback, no set_sw given
};

class Program {
 public:
  const std::vector<Clause>& clauses() const { return clauses_; }
  /// Clauses whose head has the given indicator, in source order.
  std::vector<const Clause*> clauses_for(const std::string& indicator) const;
  bool defines(const std::string& indicator) const {
    return index_.count(indicator) != 0;
  }
  /// Bodyless ground clauses.
  std::vector<const Clause*> facts() const;

  const std::vector<ValuesDecl>& values_decls() const { return values_; }
  const std::vector<SetSwDecl>& set_sw_decls() const { return set_sw_; }
  const std::vector<SwitchDecl>& switches() const { return switches_; }

  /// Declarations that unify with `switch_term` (possibly non-ground).
  std::vector<const SwitchDecl*> matching(const TermPtr& switch_term) const;

  // Builders used by the parser.
  void add_clause(Clause clause);
  void add_values(ValuesDecl decl) { values_.push_back(std::move(decl)); }
  void add_set_sw(SetSwDecl decl) { set_sw_.push_back(std::move(decl)); }
  /// Checks distributions and references and fills `switches()`.
  /// Throws ValidationError.
  void validate();

 private:
  std::vector<Clause> clauses_;
  std::map<std::string, std::vector<std::size_t>> index_;
  std::vector<ValuesDecl> values_;
  std::vector<SetSwDecl> set_sw_;
  std::vector<SwitchDecl> switches_;
};

struct Query {
  std::vector<BodyItem> items;
  /// Named query variables in textual order (anonymous ones excluded).
  std::vector<std::string> variables;
};

Program parse_program(const std::string& source);
Query parse_query(const std::string& source);

/// Source text that parses back to a structurally identical program.
std::string print_program(const Program& program);
bool structurally_equal(const Program& a, const Program& b);

}  // namespace gplp
